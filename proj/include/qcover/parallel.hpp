#pragma once

namespace qcover {

// Kernels that sweep 2^n events or many independent items come in two flavours.
// `serial` is the plain reference loop kept for testing; `parallel` is the
// OpenMP version. Both produce identical results: reductions are either exact
// (integer counts, max) or merged in a fixed order.
enum class Exec { serial, parallel };

// Worker count used by parallel kernels. Values < 1 restore the OpenMP default.
void set_workers(int workers);
int workers();

}  // namespace qcover
