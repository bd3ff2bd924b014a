#include "qcover/parallel.hpp"

#include <omp.h>

namespace qcover {

namespace {
int default_workers = omp_get_max_threads();
}

void set_workers(int workers) { omp_set_num_threads(workers < 1 ? default_workers : workers); }

int workers() { return omp_get_max_threads(); }

}  // namespace qcover
