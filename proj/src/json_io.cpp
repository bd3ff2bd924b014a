#include "qcover/json_io.hpp"

#include "qcover/errors.hpp"

namespace qcover::io {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument("malformed JSON: " + what);
}

}  // namespace

Json to_json(const Event& e) { return Json(e.labels()); }

Event event_from_json(const HistorySpace& space, const Json& j) {
    require(j.is_array(), "event must be an array of labels");
    std::vector<int> labels;
    for (const auto& x : j) {
        require(x.is_number_integer(), "labels must be integers");
        labels.push_back(x.get<int>());
    }
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "repeated label in event");
    return Event::from_labels(space, labels);
}

Json to_json(const HistorySpace& space) { return Json{{"n", space.size()}}; }

HistorySpace space_from_json(const Json& j) {
    require(j.is_object() && j.contains("n") && j["n"].is_number_integer(), "missing integer field n");
    return HistorySpace(j["n"].get<int>());
}

Json to_json(std::span<const Event> events) {
    Json out = Json::array();
    for (const auto& e : events) out.push_back(to_json(e));
    return out;
}

Json to_json(const Antichain& ac) {
    return Json{{"n", ac.space().size()}, {"elements", to_json(ac.elements())}};
}

std::vector<Event> family_from_json(const Json& j, HistorySpace& space_out) {
    space_out = space_from_json(j);
    require(j.contains("elements") && j["elements"].is_array(), "missing elements array");
    std::vector<Event> events;
    for (const auto& e : j["elements"]) events.push_back(event_from_json(space_out, e));
    return events;
}

Antichain antichain_from_json(const Json& j) {
    HistorySpace space(1);
    auto events = family_from_json(j, space);
    return Antichain(space, std::move(events));
}

Json to_json(const DecoherenceFunctional& d) {
    const int n = d.size();
    Json rows = Json::array();
    for (int i = 0; i < n; ++i) {
        Json row = Json::array();
        for (int j = 0; j < n; ++j) {
            if (d.has_exact()) {
                const auto idx = static_cast<std::size_t>(i * n + j);
                row.push_back(Json::array({to_string(d.exact_real()[idx]), to_string(d.exact_imag()[idx])}));
            } else {
                row.push_back(Json::array({d.entries()(i, j).real(), d.entries()(i, j).imag()}));
            }
        }
        rows.push_back(std::move(row));
    }
    return Json{{"n", n}, {"entries", std::move(rows)}};
}

DecoherenceFunctional matrix_from_json(const Json& j, const MatrixLoadOptions& options) {
    const int n = space_from_json(j).size();
    require(j.contains("entries") && j["entries"].is_array() && j["entries"].size() == static_cast<std::size_t>(n),
            "entries must have n rows");
    ComplexMatrix m(n, n);
    std::vector<Rational> re, im;
    bool all_exact = true;
    for (int r = 0; r < n; ++r) {
        const auto& row = j["entries"][r];
        require(row.is_array() && row.size() == static_cast<std::size_t>(n), "each row must have n entries");
        for (int c = 0; c < n; ++c) {
            const auto& cell = row[c];
            require(cell.is_array() && cell.size() == 2, "each entry must be [re, im]");
            double parts[2];
            for (int p = 0; p < 2; ++p) {
                const auto& x = cell[p];
                if (x.is_string()) {
                    const Rational q = parse_rational(x.get<std::string>());
                    parts[p] = q.get_d();
                    (p == 0 ? re : im).push_back(q);
                } else {
                    require(x.is_number(), "entry parts must be numbers or rational strings");
                    parts[p] = x.get<double>();
                    all_exact = false;
                }
            }
            m(r, c) = {parts[0], parts[1]};
        }
    }
    if (all_exact && !options.hermitize) return DecoherenceFunctional::from_rational(n, re, im);
    if (options.hermitize) return DecoherenceFunctional::hermitized(m);
    return DecoherenceFunctional(std::move(m), options.tol_herm);
}

Json to_json(const ValidationReport& r) {
    Json out{{"hermitian", r.hermitian},
             {"strongly_positive", r.strongly_positive},
             {"min_eigenvalue", r.min_eigenvalue},
             {"weakly_positive", r.weakly_positive ? Json(*r.weakly_positive) : Json(nullptr)},
             {"normalized", r.normalized},
             {"mu_omega", r.mu_omega},
             {"measure_level", r.measure_level ? Json(*r.measure_level) : Json(nullptr)},
             {"identity_residual", r.identity_residual}};
    return out;
}

Json to_json(const LambdaDecomposition& d) {
    return Json{{"k", d.k},
                {"lambda_k", to_json(d.lambda_k)},
                {"lambda_lt", to_json(d.lambda_lt)},
                {"lambda_gt", to_json(d.lambda_gt)},
                {"gamma_tilde", d.gamma_tilde},
                {"p", d.p},
                {"s0", d.s0},
                {"r", d.r()},
                {"in_class_C", d.in_class_C}};
}

Json to_json(const CoverVerdict& v) {
    Json out{{"is_cover", v.is_cover}, {"union_is_omega", v.union_is_omega}, {"span_rank", v.span_rank}};
    if (v.uncovered_label) out["uncovered_label"] = *v.uncovered_label;
    if (v.coefficients) {
        Json coeffs = Json::array();
        for (const auto& c : *v.coefficients) coeffs.push_back(to_string(c));
        out["coefficients"] = std::move(coeffs);
    }
    if (v.witness) {
        out["witness"] = to_json(*v.witness);
        out["witness_mu_omega"] = to_string(mu_exact(*v.witness, v.witness->space().full_mask()));
    }
    return out;
}

Json to_json(const Certificate& c) {
    return Json{{"kind", to_string(c.kind)}, {"pivot_k", c.pivot_k}, {"s0", c.s0}, {"p", c.p},
                {"narrative", c.narrative}};
}

Json to_json(const ScanReport& r, bool include_timing) {
    auto list = [](const std::vector<Antichain>& acs) {
        Json out = Json::array();
        for (const auto& ac : acs) out.push_back(to_json(ac.elements()));
        return out;
    };
    Json tallies = Json::object();
    for (const auto& [k, v] : r.certificate_tallies) tallies[k] = v;
    Json out{{"n", r.n},
             {"total", r.total},
             {"covers", r.covers},
             {"counterexamples", list(r.counterexamples)},
             {"uncertified", list(r.uncertified)},
             {"certificate_tallies", std::move(tallies)},
             {"certificate_conflicts", list(r.certificate_conflicts)}};
    if (include_timing) out["elapsed_ms"] = r.elapsed_ms;
    return out;
}

Json to_json(const PreclusionStructure& p) {
    return Json{{"zero_sets", to_json(p.zero_sets)},
                {"ppc_supports", to_json(p.ppc_supports.elements())},
                {"derived", to_json(p.derived.elements())},
                {"m_part", to_json(p.m_part)}};
}

Json to_json(const LevelSumCheck& c) {
    return Json{{"k", c.k},           {"lhs", c.lhs},           {"rhs_identity", c.rhs_identity},
                {"residual", c.residual}, {"mu_omega", c.mu_omega}, {"inequality_ok", c.inequality_ok}};
}

Json rays_to_json(const pks::OrthogonalStructure& s) {
    Json out = Json::array();
    for (const auto& ray : s.rays) {
        Json r = Json::array();
        for (const auto& c : ray.components()) r.push_back(Json::array({c.a, c.b}));
        out.push_back(std::move(r));
    }
    return out;
}

Json bases_to_json(const pks::OrthogonalStructure& s) {
    Json out = Json::array();
    for (const auto& b : s.bases) out.push_back(Json::array({b[0], b[1], b[2]}));
    return out;
}

Json pairs_to_json(const pks::OrthogonalStructure& s) {
    Json out = Json::array();
    for (const auto& p : s.pairs) out.push_back(Json::array({p[0], p[1]}));
    return out;
}

Json to_json(const pks::WitnessReport& r) {
    return Json{{"rays", r.ray_count},
                {"bases", r.basis_count},
                {"orthogonal_pairs", r.pair_count},
                {"reference_basis", r.reference_basis},
                {"bases_in_complement", r.bases_in_complement},
                {"pairs_in_reference", r.pairs_in_reference},
                {"pairs_in_complement", r.pairs_in_complement},
                {"gamma_green_mask", r.gamma},
                {"gamma_tilde_green_mask", r.gamma_tilde},
                {"events_containing_gamma", r.events_containing_gamma},
                {"events_containing_gamma_tilde", r.events_containing_gamma_tilde},
                {"gamma_claims_hold", r.gamma_claims_hold},
                {"gamma_tilde_claims_hold", r.gamma_tilde_claims_hold},
                {"pair_event_in_no_pks_set", r.pair_event_in_no_pks_set},
                {"pks_sets_larger_than_two", r.pks_sets_larger_than_two},
                {"antichain", r.is_antichain},
                {"inextendible", r.is_inextendible},
                {"verdict", r.verdict()},
                {"failures", r.failures}};
}

}  // namespace qcover::io
