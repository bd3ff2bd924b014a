#pragma once

#include <json.hpp>

#include "qcover/antichain.hpp"
#include "qcover/coevent.hpp"
#include "qcover/cover.hpp"
#include "qcover/measure.hpp"
#include "qcover/pks.hpp"

namespace qcover::io {

using Json = nlohmann::ordered_json;

// Event: ascending 1-based labels, e.g. [1,3]. Space: {"n": 3}.
Json to_json(const Event& e);
Event event_from_json(const HistorySpace& space, const Json& j);
Json to_json(const HistorySpace& space);
HistorySpace space_from_json(const Json& j);
Json to_json(std::span<const Event> events);

// Antichain file: {"n": int, "elements": [[labels...], ...]}.
Json to_json(const Antichain& ac);
Antichain antichain_from_json(const Json& j);
// Same file shape without the antichain requirement (cover families).
std::vector<Event> family_from_json(const Json& j, HistorySpace& space_out);

// Matrix file: {"n": int, "entries": [[[re, im], ...], ...]} row-major. Entries are
// numbers, or strings like "1/3" which make the functional exact.
Json to_json(const DecoherenceFunctional& d);
struct MatrixLoadOptions {
    bool hermitize = false;
    double tol_herm = Tolerances{}.herm;
};
DecoherenceFunctional matrix_from_json(const Json& j, const MatrixLoadOptions& options = {});

Json to_json(const ValidationReport& r);
Json to_json(const LambdaDecomposition& d);
Json to_json(const CoverVerdict& v);
Json to_json(const Certificate& c);
Json to_json(const ScanReport& r, bool include_timing = true);
Json to_json(const PreclusionStructure& p);
Json to_json(const LevelSumCheck& c);

Json rays_to_json(const pks::OrthogonalStructure& s);
Json bases_to_json(const pks::OrthogonalStructure& s);
Json pairs_to_json(const pks::OrthogonalStructure& s);
Json to_json(const pks::WitnessReport& r);

}  // namespace qcover::io
