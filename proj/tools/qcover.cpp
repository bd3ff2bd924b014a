// qcover: command-line front end. Every subcommand writes one JSON report.
//
// Exit codes: 0 ok, 2 bad input, 3 counterexample found, 4 internal failure.

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "qcover/antichain.hpp"
#include "qcover/coevent.hpp"
#include "qcover/cover.hpp"
#include "qcover/errors.hpp"
#include "qcover/json_io.hpp"
#include "qcover/measure.hpp"
#include "qcover/parallel.hpp"
#include "qcover/pks.hpp"

using namespace qcover;
using io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCounterexample = 3;
constexpr int kExitInternal = 4;

struct Config {
    std::string command;
    std::optional<int> n;
    std::optional<int> k;
    std::optional<int> rank;
    std::uint64_t seed = 42;
    std::optional<std::uint64_t> samples;
    Tolerances tol;
    int workers = 0;
    bool exact = false;
    std::string dmatrix;
    std::string antichain;
    std::string out;
    std::string family = "level_k";
    std::optional<int> m;
    std::optional<int> l;
};

template <class T>
Json opt(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json config_json(const Config& c) {
    return Json{{"n", opt(c.n)},
                {"k", opt(c.k)},
                {"rank", opt(c.rank)},
                {"seed", c.seed},
                {"samples", opt(c.samples)},
                {"tolerances",
                 {{"herm", c.tol.herm},
                  {"psd", c.tol.psd},
                  {"zero", c.tol.zero},
                  {"identity", c.tol.identity},
                  {"derived", c.tol.derived}}},
                {"workers", c.workers},
                {"exact", c.exact},
                {"dmatrix", c.dmatrix.empty() ? Json(nullptr) : Json(c.dmatrix)},
                {"antichain", c.antichain.empty() ? Json(nullptr) : Json(c.antichain)}};
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

struct Outcome {
    Json result;
    int exit_code = kExitOk;
};

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

// Accepts a bare file or a previous report whose "result" holds the payload.
Json unwrap(Json j) {
    if (j.is_object() && j.contains("result") && j["result"].is_object()) return j["result"];
    return j;
}

int require_n(const Config& c) {
    if (!c.n) throw InvalidArgument("--n is required");
    return *c.n;
}

DecoherenceFunctional functional(const Config& c) {
    if (!c.dmatrix.empty()) return io::matrix_from_json(unwrap(read_json(c.dmatrix)), {.tol_herm = c.tol.herm});
    const int n = require_n(c);
    return sample_spd({.n = n, .rank = c.rank.value_or(n), .seed = c.seed}, c.tol.zero);
}

std::vector<Event> family_file(const Config& c, HistorySpace& space) {
    if (c.antichain.empty()) throw InvalidArgument("--antichain is required");
    return io::family_from_json(unwrap(read_json(c.antichain)), space);
}

Antichain antichain_file(const Config& c) {
    HistorySpace space(1);
    auto events = family_file(c, space);
    return Antichain(space, std::move(events));
}

Json certificate_json(const std::optional<Certificate>& c) { return c ? io::to_json(*c) : Json(nullptr); }

// Sample i of the identity suite: varied rank, and every other sample forced to
// have a zero-measure event so the zero-measure consequences are exercised.
DecoherenceFunctional suite_sample(int n, std::uint64_t seed, std::uint64_t i, double tol_zero) {
    SampleRequest req{.n = n, .rank = 1 + static_cast<int>(i % static_cast<std::uint64_t>(n)), .seed = seed + i};
    if (i % 2 == 1 && n >= 2) {
        const HistorySpace s(n);
        Mask z = static_cast<Mask>((i * 2654435761ULL) % s.full_mask()) + 1;
        if (z == s.full_mask()) z = 1;
        req.annihilate.emplace_back(s, z);
    }
    return sample_spd(req, tol_zero);
}

Outcome cmd_identities(const Config& c) {
    const int n = require_n(c);
    if (n < 3 || n > kPairCheckMaxN) throw RangeError("identities needs 3 <= n <= 12");
    const std::uint64_t samples = c.samples.value_or(100);
    double identity = 0.0, identity_rel = 0.0, i3 = 0.0;
    double level_sum_residual = 0.0;
    std::uint64_t inequality_failures = 0;
    PairInequalities worst;
    bool passed = true;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const auto d = suite_sample(n, c.seed, i, c.tol.zero);
        const double scale = std::max(1.0, d.max_abs_entry());
        const double r = verify_identity(d);
        identity = std::max(identity, r);
        identity_rel = std::max(identity_rel, r / scale);
        if (n <= 8) {
            const double t = max_interference(d, 3);
            i3 = std::max(i3, t);
            passed &= t <= c.tol.identity * scale * n * n;
        }
        const auto p = pair_inequalities(d, c.tol.zero);
        worst.cauchy_schwarz = std::max(worst.cauchy_schwarz, p.cauchy_schwarz);
        worst.sandwich = std::max(worst.sandwich, p.sandwich);
        worst.first = std::max(worst.first, p.first);
        worst.second = std::max(worst.second, p.second);
        worst.pairs += p.pairs;
        for (int k = 2; k <= n - 1; ++k) {
            const auto ls = level_sum_check(d, k, c.tol);
            level_sum_residual = std::max(level_sum_residual, ls.residual);
            inequality_failures += !ls.inequality_ok;
        }
    }
    passed &= identity_rel <= c.tol.identity;
    passed &= worst.first <= c.tol.derived && worst.second <= c.tol.derived;
    passed &= worst.cauchy_schwarz <= c.tol.zero && worst.sandwich <= c.tol.zero;
    passed &= inequality_failures == 0;
    Json result{{"n", n},
                {"samples", samples},
                {"max_identity_residual", identity},
                {"max_identity_residual_relative", identity_rel},
                {"max_i3", n <= 8 ? Json(i3) : Json(nullptr)},
                {"pairs_checked", worst.pairs},
                {"max_cauchy_schwarz_violation", worst.cauchy_schwarz},
                {"max_sandwich_violation", worst.sandwich},
                {"max_first_deviation", worst.first},
                {"max_second_deviation", worst.second},
                {"max_level_sum_residual", level_sum_residual},
                {"level_sum_inequality_failures", inequality_failures},
                {"passed", passed}};
    return {std::move(result), passed ? kExitOk : kExitInternal};
}

Outcome cmd_validate(const Config& c) {
    const auto d = functional(c);
    const auto report = validate(d, c.tol);
    Json result = io::to_json(report);
    result["source"] = c.dmatrix.empty() ? "sampled" : "file";
    const bool ok = report.hermitian && report.strongly_positive;
    return {std::move(result), ok ? kExitOk : kExitInput};
}

Outcome cmd_measure(const Config& c) {
    const auto d = functional(c);
    const HistorySpace space = d.space();
    std::vector<Event> events;
    if (!c.antichain.empty()) {
        HistorySpace fs(1);
        events = family_file(c, fs);
        if (!(fs == space)) throw InvalidArgument("antichain and matrix disagree on n");
    } else if (c.k) {
        events = level_elements(space, *c.k);
    } else {
        if (space.size() > kCoeventMaxN) throw ResourceLimit("listing every event needs n <= 12; pass --k or --antichain");
        for (Mask m = 1; m <= space.full_mask(); ++m) events.emplace_back(space, m);
    }
    const bool exact = c.exact && d.has_exact();
    if (c.exact && !d.has_exact()) throw InvalidArgument("--exact needs a matrix with rational entries");
    Json rows = Json::array();
    for (const auto& e : events) {
        Json row{{"event", io::to_json(e)}, {"mu", mu(d, e, c.tol.herm)}};
        if (exact) row["mu_exact"] = to_string(mu_exact(d, e.mask()));
        rows.push_back(std::move(row));
    }
    Json result{{"n", space.size()}, {"mu_omega", mu(d, Event::omega(space), c.tol.herm)}, {"measures", rows}};
    if (space.size() <= 8) result["measure_level"] = opt(measure_level(d, std::min(3, space.size()), c.tol.zero));
    return {std::move(result)};
}

Outcome cmd_cover_check(const Config& c) {
    HistorySpace space(1);
    const auto events = family_file(c, space);
    const auto verdict = decide(space, events);
    Json result = io::to_json(verdict);
    int code = kExitOk;
    if (is_antichain(events)) {
        const Antichain ac(space, events);
        const bool inextendible = is_inextendible(space, ac).inextendible;
        const auto cert = certificate_class_C(space, ac);
        result["antichain"] = true;
        result["inextendible"] = inextendible;
        result["certificate"] = certificate_json(cert);
        if (inextendible && !verdict.is_cover) code = kExitCounterexample;
        if (cert && !verdict.is_cover) code = kExitInternal;
    } else {
        result["antichain"] = false;
    }
    return {std::move(result), code};
}

Outcome cmd_scan(const Config& c) {
    const int n = require_n(c);
    const auto report = scan(HistorySpace(n), {.limit = kHardEnumerationLimit});
    int code = kExitOk;
    if (!report.counterexamples.empty()) code = kExitCounterexample;
    if (!report.certificate_conflicts.empty()) code = kExitInternal;
    return {io::to_json(report, false), code};
}

Outcome cmd_coevents(const Config& c) {
    const auto d = functional(c);
    const CoeventOptions options{.tol_zero = c.tol.zero, .exact = c.exact};
    const auto structure = derived_antichain(d, options);
    Json result = io::to_json(structure);
    result["mu_omega"] = mu(d, Event::omega(d.space()), c.tol.herm);
    if (d.size() >= 2 && is_strongly_positive(d, c.tol.psd)) {
        const auto a = nontriviality(d, options);
        result["nontriviality"] = Json{{"event", io::to_json(a)}, {"mu", mu(d, a, c.tol.herm)}};
    } else {
        result["nontriviality"] = nullptr;
    }
    return {std::move(result)};
}

Outcome cmd_antichain_enumerate(const Config& c) {
    const HistorySpace space(require_n(c));
    Json list = Json::array();
    for_each_inextendible(space, [&](const Antichain& ac) { list.push_back(io::to_json(ac.elements())); },
                          kHardEnumerationLimit);
    return {Json{{"n", space.size()}, {"count", list.size()}, {"antichains", list}}};
}

Outcome cmd_antichain_classify(const Config& c) {
    const auto ac = antichain_file(c);
    Json levels = Json::array();
    for (const auto& d : classify(ac.space(), ac)) levels.push_back(io::to_json(d));
    return {Json{{"n", ac.space().size()},
                 {"elements", io::to_json(ac.elements())},
                 {"inextendible", is_inextendible(ac.space(), ac).inextendible},
                 {"levels", levels},
                 {"certificate", certificate_json(certificate_class_C(ac.space(), ac))}}};
}

Family parse_family(const std::string& name) {
    for (auto f : {Family::level_k, Family::A1, Family::A2, Family::A3, Family::A4})
        if (to_string(f) == name) return f;
    throw InvalidArgument("unknown family " + name);
}

Outcome cmd_antichain_generate(const Config& c) {
    const HistorySpace space(require_n(c));
    const FamilyParams params{.k = c.k.value_or(0), .m = c.m.value_or(0), .l = c.l.value_or(0)};
    return {io::to_json(generate(space, parse_family(c.family), params))};
}

Outcome cmd_pks_rays(const Config&) {
    const auto s = pks::orthogonal_structure();
    Json labels = Json::array();
    for (const auto& r : s.rays) labels.push_back(r.to_string());
    return {Json{{"count", s.rays.size()}, {"rays", labels}, {"components", io::rays_to_json(s)}}};
}

Outcome cmd_pks_bases(const Config&) {
    const auto s = pks::orthogonal_structure();
    return {Json{{"count", s.bases.size()},
                 {"bases", io::bases_to_json(s)},
                 {"orthogonal_pairs", s.pairs.size()},
                 {"pairs", io::pairs_to_json(s)}}};
}

Outcome cmd_pks_search(const Config&) {
    const auto s = pks::orthogonal_structure();
    const auto r = pks::search_consistent_coloring(s);
    Json result{{"satisfiable", r.coloring.has_value()},
                {"nodes", r.stats.nodes},
                {"backtracks", r.stats.backtracks},
                {"propagations", r.stats.propagations}};
    if (r.coloring) result["coloring"] = *r.coloring;
    return {std::move(result), r.coloring ? kExitCounterexample : kExitOk};
}

Outcome cmd_pks_witness(const Config& c) {
    const auto s = pks::orthogonal_structure();
    const auto w = pks::witness_check(s);
    const std::uint64_t samples = c.samples.value_or(100000);
    const auto uncovered = pks::count_uncovered_samples(s, samples, c.seed);
    Json result = io::to_json(w);
    result["random_colorings"] = Json{{"samples", samples}, {"seed", c.seed}, {"uncovered", uncovered}};
    return {std::move(result), w.failures.empty() && uncovered == 0 ? kExitOk : kExitInternal};
}

void add_n(CLI::App* cmd, Config& c, bool required = false) {
    auto* o = cmd->add_option("--n", c.n, "number of fine-grained histories")->check(CLI::Range(1, kMaxHistories));
    if (required) o->required();
}

void add_seed(CLI::App* cmd, Config& c) { cmd->add_option("--seed", c.seed, "random seed")->capture_default_str(); }

void add_tolerances(CLI::App* cmd, Config& c) {
    cmd->add_option("--tol-zero", c.tol.zero, "zero-measure tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-psd", c.tol.psd, "eigenvalue tolerance, relative")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-herm", c.tol.herm, "Hermiticity tolerance, relative")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-identity", c.tol.identity, "identity residual tolerance")->check(CLI::PositiveNumber);
}

void add_matrix_source(CLI::App* cmd, Config& c) {
    cmd->add_option("--dmatrix", c.dmatrix, "matrix JSON file; sampled from --n/--seed/--rank when absent");
    add_n(cmd, c);
    add_seed(cmd, c);
    cmd->add_option("--rank", c.rank, "rank of the sampled Gram matrix")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum measure covers, preclusion and Peres-set tools"};
    app.require_subcommand(1);
    Config c;
    app.add_option("--workers", c.workers, "worker threads (0 = all)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", c.out, "write the report here instead of stdout");

    using Handler = Outcome (*)(const Config&);
    Handler handler = nullptr;
    auto bind = [&](CLI::App* cmd, Handler h, std::string name) {
        cmd->add_option("--workers", c.workers, "worker threads (0 = all)")->check(CLI::NonNegativeNumber);
        cmd->add_option("--out", c.out, "write the report here instead of stdout");
        cmd->callback([&, h, name] {
            handler = h;
            c.command = name;
        });
    };

    auto* identities = app.add_subcommand("identities", "check measure identities and inequalities on samples");
    add_n(identities, c, true);
    add_seed(identities, c);
    identities->add_option("--samples", c.samples, "number of sampled functionals (default 100)");
    add_tolerances(identities, c);
    bind(identities, cmd_identities, "identities");

    auto* val = app.add_subcommand("validate", "validate a decoherence functional");
    add_matrix_source(val, c);
    add_tolerances(val, c);
    bind(val, cmd_validate, "validate");

    auto* meas = app.add_subcommand("measure", "evaluate the quantum measure on events");
    add_matrix_source(meas, c);
    meas->add_option("--antichain", c.antichain, "events to evaluate (antichain file format)");
    meas->add_option("--k", c.k, "evaluate every event of this size");
    meas->add_flag("--exact", c.exact, "also report exact rational measures");
    add_tolerances(meas, c);
    bind(meas, cmd_measure, "measure");

    auto* cover = app.add_subcommand("cover-check", "decide whether a family is a quantum cover");
    cover->add_option("--antichain", c.antichain, "family file")->required();
    bind(cover, cmd_cover_check, "cover-check");

    auto* sc = app.add_subcommand("scan", "decide every inextendible antichain for n histories");
    add_n(sc, c, true);
    bind(sc, cmd_scan, "scan");

    auto* co = app.add_subcommand("coevents", "zero sets, preclusive coevent supports and the derived antichain");
    add_matrix_source(co, c);
    co->add_flag("--exact", c.exact, "decide zero sets in rational arithmetic");
    add_tolerances(co, c);
    bind(co, cmd_coevents, "coevents");

    auto* ac = app.add_subcommand("antichain", "antichain utilities");
    ac->require_subcommand(1);
    auto* en = ac->add_subcommand("enumerate", "list every inextendible antichain");
    add_n(en, c, true);
    bind(en, cmd_antichain_enumerate, "antichain enumerate");
    auto* cl = ac->add_subcommand("classify", "level decomposition and certificate");
    cl->add_option("--antichain", c.antichain, "antichain file")->required();
    bind(cl, cmd_antichain_classify, "antichain classify");
    auto* gen = ac->add_subcommand("generate", "build a named antichain family");
    add_n(gen, c, true);
    gen->add_option("--family", c.family, "level_k, A1, A2, A3 or A4")->capture_default_str();
    gen->add_option("--k", c.k, "level for level_k");
    gen->add_option("--m", c.m, "block count for A3");
    gen->add_option("--l", c.l, "middle level for A4");
    bind(gen, cmd_antichain_generate, "antichain generate");

    auto* pk = app.add_subcommand("pks", "Peres-set colorings");
    pk->require_subcommand(1);
    bind(pk->add_subcommand("rays", "the 33 rays"), cmd_pks_rays, "pks rays");
    bind(pk->add_subcommand("bases", "orthogonal bases and pairs"), cmd_pks_bases, "pks bases");
    bind(pk->add_subcommand("search", "look for a consistent coloring"), cmd_pks_search, "pks search");
    auto* wit = pk->add_subcommand("witness", "check the PKS collection against a reference basis");
    add_seed(wit, c);
    wit->add_option("--samples", c.samples, "random colorings to test (default 100000)");
    bind(wit, cmd_pks_witness, "pks witness");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    set_workers(c.workers);
    Outcome outcome;
    try {
        outcome = handler(c);
    } catch (const ConsistencyError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }

    Json report{{"command", c.command},
                {"config", config_json(c)},
                {"result", std::move(outcome.result)},
                {"exit_code", outcome.exit_code},
                {"timestamp", utc_timestamp()}};
    const std::string text = report.dump(2) + "\n";
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(c.out);
        if (!out) {
            std::cerr << "error: cannot write " << c.out << '\n';
            return kExitInput;
        }
        out << text;
    }
    return outcome.exit_code;
}
