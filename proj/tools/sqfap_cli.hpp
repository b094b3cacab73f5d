#pragma once

// Command-line front end. Kept in a header so the test suite can drive it
// in-process with string streams.
//
// Exit codes: 0 ok, 2 invalid input, 3 internal invariant violated.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqfap/sqfap.hpp"

namespace sqfap::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInternal = 3;

inline const char* kScanHeader = "X,q,a,count_ap,count_coprime,E_num,E_den,ratio_hooley,n_q_a,ratio_corollary";
inline const char* kBoxHeader =
    "u,v,dyadic,M,N,q,a,count,trivial,weil,pierce_MN,pierce_MN_applicable,pierce_NM,pierce_NM_applicable,"
    "interpolated,interpolated_applicable,ratio_trivial,ratio_weil,ratio_pierce_MN,ratio_pierce_NM,ratio_interpolated";

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline json to_json(const Modulus& m) {
    return {{"q", m.q}, {"prime_factors", m.prime_factors}, {"phi", m.phi}, {"omega", m.omega}};
}

inline json to_json(const ErrorTermResult& e) {
    return {{"X", e.X},
            {"q", e.modulus.q},
            {"a", e.a},
            {"phi", e.modulus.phi},
            {"count_ap", e.progression_count},
            {"count_coprime", e.coprime_count},
            {"E", e.E.str()},
            {"ratio_hooley", reference_ratio(e)}};
}

inline json to_json(const BoundValue& b) { return {{"value", b.value}, {"applicable", b.applicable}, {"ratio", b.ratio}}; }

inline json to_json(const BoxQuery& q, const BoundReport& r) {
    return {{"u", q.u},
            {"v", q.v},
            {"M", q.M},
            {"N", q.N},
            {"q", q.modulus.q},
            {"a", q.a},
            {"dyadic", q.dyadic},
            {"count", r.count},
            {"alpha", r.alpha.str()},
            {"trivial", to_json(r.trivial)},
            {"weil", to_json(r.weil)},
            {"pierce_MN", to_json(r.pierce_MN)},
            {"pierce_NM", to_json(r.pierce_NM)},
            {"interpolated", to_json(r.interpolated)}};
}

inline std::string box_csv_row(const BoxQuery& q, const BoundReport& r) {
    std::ostringstream s;
    s << q.u << ',' << q.v << ',' << (q.dyadic ? 1 : 0) << ',' << fmt_double(q.M) << ',' << fmt_double(q.N) << ','
      << q.modulus.q << ',' << q.a << ',' << r.count << ',' << fmt_double(r.trivial.value) << ','
      << fmt_double(r.weil.value) << ',' << fmt_double(r.pierce_MN.value) << ',' << r.pierce_MN.applicable << ','
      << fmt_double(r.pierce_NM.value) << ',' << r.pierce_NM.applicable << ',' << fmt_double(r.interpolated.value)
      << ',' << r.interpolated.applicable << ',' << fmt_double(r.trivial.ratio) << ',' << fmt_double(r.weil.ratio)
      << ',' << fmt_double(r.pierce_MN.ratio) << ',' << fmt_double(r.pierce_NM.ratio) << ','
      << fmt_double(r.interpolated.ratio);
    return s.str();
}

inline json to_json(const PipelineReport& r) {
    json boxes = json::array();
    for (const auto& b : r.boxes) {
        boxes.push_back({{"M", b.M},
                         {"N", b.N},
                         {"count", b.count},
                         {"regime", b.small_m ? "small_m" : "lemma"},
                         {"bottom_row", b.bottom_row},
                         {"cond1", b.cond1},
                         {"cond2", b.cond2},
                         {"lemma_applicable", b.lemma_applicable},
                         {"bound", b.bound},
                         {"interpolated", b.interpolated},
                         {"ratio", b.ratio}});
    }
    return {{"X", r.X},
            {"q", r.modulus.q},
            {"a", r.a},
            {"M0", r.M0},
            {"N0", r.N0},
            {"alpha", r.alpha.str()},
            {"E_direct", r.E_direct.str()},
            {"E_decomposed", r.E_decomposed.str()},
            {"identity_holds", r.E_direct == r.E_decomposed},
            {"head", r.head.str()},
            {"tail_small_n", r.tail_small_n.str()},
            {"main_term_removed", r.main_term_removed.str()},
            {"progression_sum", r.progression_sum},
            {"boxes", boxes},
            {"box_total", r.box_total},
            {"max_box_count", r.max_box_count},
            {"majorant", r.majorant.str()},
            {"coarse_majorant", r.coarse_majorant.str()},
            {"majorization_holds", abs(r.E_direct) <= r.majorant},
            {"lemma_boxes_outside_range", r.lemma_boxes_outside_range},
            {"esup_rhs", r.esup_rhs},
            {"almostthere_rhs", r.almostthere_rhs}};
}

inline json to_json(const ExponentForm& f) {
    return {{"label", f.label}, {"coeff_x", f.coeff_x.str()}, {"coeff_rho", f.coeff_rho.str()}};
}

inline json to_json(const ChoiceReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"label", c.label}, {"lhs", c.lhs.str()}, {"relation", c.relation}, {"rhs", c.rhs.str()}, {"pass", c.pass}});
    return {{"rho", rep.rho.str()},
            {"m0_exponent", rep.m0_exponent.str()},
            {"n0_exponent", rep.n0_exponent.str()},
            {"floor_branch", rep.floor_branch},
            {"max_box_m", rep.max_box_m.str()},
            {"max_box_n", rep.max_box_n.str()},
            {"all_pass", rep.all_pass()},
            {"checks", checks}};
}

/// Output sink: --out path or the supplied stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw input_error("cannot open output file: " + path);
            out_ = file_.get();
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* out_;
};

inline Rational parse_rational_arg(const std::string& s, const char* what) {
    try {
        return Rational::parse(s);
    } catch (const input_error&) {
        throw;
    } catch (const std::exception&) {
        throw input_error(std::string("bad rational for ") + what + ": " + s);
    }
}

inline std::vector<ExponentForm> load_menu(const std::string& name) {
    if (name == "standard") return standard_menu();
    if (name == "extended") return extended_menu();
    if (name == "single-orientation") return single_orientation_menu();
    std::ifstream in(name);
    if (!in) throw input_error("unknown menu preset or unreadable file: " + name);
    return parse_menu(in);
}

struct ScanOptions {
    u64 x_min = 100000;
    u64 x_max = 100000;
    u64 x_factor = 10;
    u64 q_min = 1;
    u64 q_max = 1000;
    std::string a_policy = "1";
    unsigned samples = 1;
    u64 seed = 0;
    u64 start_row = 0;
    unsigned workers = 1;
};

/// Streams the scan CSV. Row order: X ascending, q ascending, a ascending.
inline void run_scan(const ScanOptions& o, std::ostream& out) {
    if (o.x_min < 1 || o.x_max > kMaxFullSieve) throw input_error("scan: X range must lie in [1, 2^28]");
    if (o.x_factor < 2) throw input_error("scan: --x-factor must be >= 2");
    if (o.q_min < 1) throw input_error("scan: q range must start at >= 1");
    if (o.q_max > (u64{1} << 24)) throw input_error("scan: q_max too large");
    bool all = o.a_policy == "all", random = o.a_policy == "random";
    i64 fixed_a = 0;
    if (!all && !random) {
        try {
            std::size_t pos = 0;
            fixed_a = std::stoll(o.a_policy, &pos);
            if (pos != o.a_policy.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw input_error("scan: --a must be an integer, 'all', or 'random'");
        }
    }
    out << kScanHeader << '\n';
    if (o.x_min > o.x_max || o.q_min > o.q_max) return;

    std::vector<Modulus> moduli;
    for (u64 q = o.q_min; q <= o.q_max; ++q)
        if (is_squarefree(q)) moduli.push_back(factor_modulus(q));
    if (moduli.empty()) return;
    const SieveWindow least_window = mobius_sieve(std::min<u64>(kMaxFullSieve, std::max<u64>(64, 32 * o.q_max)));

    u64 row = 0;
    for (u64 X = o.x_min; X <= o.x_max; X = X > o.x_max / o.x_factor ? o.x_max + 1 : X * o.x_factor) {
        const SieveWindow window = mobius_sieve(X);
        std::vector<std::vector<std::string>> rows(moduli.size());
        detail::parallel_for(moduli.size(), o.workers, [&](std::size_t i) {
            const Modulus& mod = moduli[i];
            std::vector<u64> residues;
            if (all) {
                for (u64 r = 0; r < mod.q; ++r)
                    if (gcd(r, mod.q) == 1) residues.push_back(r);
            } else if (random) {
                std::mt19937_64 rng(o.seed ^ (X * 0x9E3779B97F4A7C15ULL) ^ (mod.q * 0xC2B2AE3D27D4EB4FULL));
                std::vector<u64> units;
                for (u64 r = 0; r < mod.q; ++r)
                    if (gcd(r, mod.q) == 1) units.push_back(r);
                std::set<u64> pick;
                for (unsigned k = 0; k < o.samples; ++k) pick.insert(units[rng() % units.size()]);
                residues.assign(pick.begin(), pick.end());
            } else if (is_unit(fixed_a, mod.q)) {
                residues.push_back(normalize_residue(fixed_a, mod.q));
            }
            if (residues.empty()) return;
            const ClassCounts counts = class_counts(window, X, mod);
            const auto least = least_squarefree_all(mod, least_window);
            const double qpow = std::pow(static_cast<double>(mod.q), 36.0 / 25.0);
            for (u64 r : residues) {
                const auto e = error_term(counts, X, mod, static_cast<i64>(r));
                std::ostringstream s;
                s << X << ',' << mod.q << ',' << r << ',' << e.progression_count << ',' << e.coprime_count << ','
                  << detail::to_string128(e.E.num()) << ',' << detail::to_string128(e.E.den()) << ','
                  << fmt_double(reference_ratio(e)) << ',' << least[r] << ','
                  << fmt_double(static_cast<double>(least[r]) / qpow);
                rows[i].push_back(s.str());
            }
        });
        for (const auto& group : rows)
            for (const auto& line : group) {
                if (row++ >= o.start_row) out << line << '\n';
            }
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Squarefree numbers in arithmetic progressions: exact counts, box counts, exponent calculus"};
    app.require_subcommand(1);
    unsigned workers = default_workers();
    std::string out_path;
    app.add_option("--workers", workers, "worker threads (default: $SQFAP_WORKERS or 1)")->check(CLI::PositiveNumber);
    app.add_option("--out", out_path, "write output to this file instead of stdout");

    // error-term
    u64 et_x = 0, et_q = 1;
    i64 et_a = 0;
    bool et_decompose = false;
    auto* et = app.add_subcommand("error-term", "E(X,q,a) by direct sieving, optionally via the mu^2 decomposition");
    et->add_option("--x", et_x, "cutoff X")->required();
    et->add_option("--q", et_q, "squarefree modulus")->required();
    et->add_option("--a", et_a, "residue coprime to q")->required();
    et->add_flag("--decompose", et_decompose, "also evaluate the decomposition and compare");

    // scan
    ScanOptions so;
    auto* sc = app.add_subcommand("scan", "CSV grid of E, reference ratio and n(q,a)");
    sc->add_option("--x-min", so.x_min);
    sc->add_option("--x-max", so.x_max);
    sc->add_option("--x-factor", so.x_factor, "geometric step between X values");
    sc->add_option("--q-min", so.q_min);
    sc->add_option("--q-max", so.q_max);
    sc->add_option("--a", so.a_policy, "integer residue, 'all' units, or 'random'");
    sc->add_option("--samples", so.samples, "units sampled per (X,q) with --a random");
    sc->add_option("--seed", so.seed);
    sc->add_option("--start-row", so.start_row, "skip this many data rows (resume)");

    // count-box
    int cb_u = 1, cb_v = -2;
    double cb_m = 1, cb_n = 1;
    u64 cb_q = 1, cb_a = 1;
    bool cb_dyadic = false, cb_sym = false;
    std::string cb_alpha = "2/15";
    auto* cb = app.add_subcommand("count-box", "exact S_{u,v}(M,N,q,a) with bound envelopes");
    cb->add_option("--u", cb_u);
    cb->add_option("--v", cb_v);
    cb->add_option("--m", cb_m)->required();
    cb->add_option("--n", cb_n)->required();
    cb->add_option("--q", cb_q)->required();
    cb->add_option("--a", cb_a)->required();
    cb->add_option("--alpha", cb_alpha);
    cb->add_flag("--dyadic", cb_dyadic, "count over (M,2M]x(N,2N]");
    cb->add_flag("--symmetry", cb_sym, "also evaluate S_{-v,-u}(N,M,q,a)");

    // scan-boxes
    u64 sb_q = 10001, sb_a = 1;
    int sb_u = 1, sb_v = -2;
    double sb_lo = 0.25, sb_hi = 0.75, sb_ratio = 2;
    bool sb_dyadic = false;
    std::string sb_alpha = "2/15", sb_format = "csv";
    auto* sb = app.add_subcommand("scan-boxes", "bound report over a geometric grid of boxes");
    sb->add_option("--q", sb_q);
    sb->add_option("--a", sb_a);
    sb->add_option("--u", sb_u);
    sb->add_option("--v", sb_v);
    sb->add_option("--lo", sb_lo, "smallest side as a power of q");
    sb->add_option("--hi", sb_hi, "largest side as a power of q");
    sb->add_option("--ratio", sb_ratio, "geometric step");
    sb->add_option("--alpha", sb_alpha);
    sb->add_flag("--dyadic", sb_dyadic);
    sb->add_option("--format", sb_format)->check(CLI::IsMember({"csv", "json"}));

    // pipeline
    u64 pl_x = 0, pl_q = 1;
    i64 pl_a = 0;
    double pl_m0 = 0, pl_n0 = 0;
    std::string pl_alpha = "2/15";
    auto* pl = app.add_subcommand("pipeline", "staged decomposition report for one (X,q,a)");
    pl->add_option("--x", pl_x)->required();
    pl->add_option("--q", pl_q)->required();
    pl->add_option("--a", pl_a)->required();
    pl->add_option("--m0", pl_m0, "default 2*max(X q^-3/2, 1)");
    pl->add_option("--n0", pl_n0, "default 2 X^1/2 q^-3/8");
    pl->add_option("--alpha", pl_alpha);

    // optimize
    std::string op_menu = "standard";
    auto* op = app.add_subcommand("optimize", "distribution exponent from a term menu");
    op->add_option("--menu", op_menu, "standard | extended | single-orientation | path to menu file");

    // verify-choices
    std::string vc_rho = "25/36";
    auto* vc = app.add_subcommand("verify-choices", "exponent-level feasibility of the M0/N0 choices");
    vc->add_option("--rho", vc_rho, "log_X q as a rational");

    // least
    u64 ls_q = 1;
    std::string ls_a = "1";
    auto* ls = app.add_subcommand("least", "least squarefree n = a (mod q)");
    ls->add_option("--q", ls_q)->required();
    ls->add_option("--a", ls_a, "residue or 'all'");

    // factor
    u64 fc_q = 1;
    auto* fc = app.add_subcommand("factor", "factor a squarefree modulus");
    fc->add_option("--q", fc_q)->required();

    // sieve
    u64 sv_start = 1, sv_length = 0;
    bool sv_values = false;
    auto* sv = app.add_subcommand("sieve", "Mobius values over a window");
    sv->add_option("--start", sv_start);
    sv->add_option("--length", sv_length)->required();
    sv->add_flag("--values", sv_values, "emit n,mu CSV instead of a summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInput;
    }

    try {
        Sink sink(out_path, out);
        std::ostream& o = sink.stream();
        if (*et) {
            const Modulus mod = factor_modulus(et_q);
            const auto e = error_term(et_x, mod, et_a);
            json j = to_json(e);
            if (et_decompose) {
                const Rational dec = decompose_error(et_x, mod, et_a);
                j["E_decomposed"] = dec.str();
                j["identity_holds"] = dec == e.E;
                if (!(dec == e.E)) {
                    o << j.dump(2) << '\n';
                    err << "error: decomposition identity violated\n";
                    return kExitInternal;
                }
            }
            o << j.dump(2) << '\n';
        } else if (*sc) {
            so.workers = workers;
            run_scan(so, o);
        } else if (*cb) {
            const BoxQuery q{cb_u, cb_v, cb_m, cb_n, factor_modulus(cb_q), cb_a, cb_dyadic};
            const auto rep = evaluate_bounds(q, parse_rational_arg(cb_alpha, "--alpha"), workers);
            json j = to_json(q, rep);
            if (cb_sym) {
                const auto s = check_symmetry(q, workers);
                j["symmetry"] = {{"lhs", s.lhs}, {"rhs", s.rhs}, {"equal", s.equal()}};
                if (!s.equal()) {
                    o << j.dump(2) << '\n';
                    err << "error: symmetry relation violated\n";
                    return kExitInternal;
                }
            }
            o << j.dump(2) << '\n';
        } else if (*sb) {
            const Modulus mod = factor_modulus(sb_q);
            BoxGrid grid = geometric_grid(sb_q, sb_lo, sb_hi, sb_ratio);
            grid.u = sb_u;
            grid.v = sb_v;
            grid.dyadic = sb_dyadic;
            const auto rows = scan_boxes(mod, sb_a, grid, parse_rational_arg(sb_alpha, "--alpha"), workers);
            if (sb_format == "json") {
                json arr = json::array();
                for (const auto& r : rows) arr.push_back(to_json(r.query, r.report));
                o << arr.dump(2) << '\n';
            } else {
                o << kBoxHeader << '\n';
                for (const auto& r : rows) o << box_csv_row(r.query, r.report) << '\n';
            }
        } else if (*pl) {
            const Modulus mod = factor_modulus(pl_q);
            auto choice = standard_choices(pl_x, mod);
            if (pl_m0 > 0) choice.M0 = pl_m0;
            if (pl_n0 > 0) choice.N0 = pl_n0;
            const auto rep = pipeline_report(pl_x, mod, pl_a, choice.M0, choice.N0, parse_rational_arg(pl_alpha, "--alpha"), workers);
            json j = to_json(rep);
            j["choices_clamped"] = choice.clamped;
            o << j.dump(2) << '\n';
        } else if (*op) {
            const auto terms = load_menu(op_menu);
            const auto alpha = best_alpha({Rational(2, 3), Rational(1, 4)}, {Rational(1, 4), Rational(2, 3)});
            const auto theta = compute_theta(terms);
            json jt = json::array();
            for (const auto& t : terms) jt.push_back(to_json(t));
            json j = {{"menu", op_menu}, {"terms", jt}, {"alpha", alpha.alpha.str()}, {"box_exponent", alpha.uniform_exponent.str()}};
            if (!theta.feasible) {
                j["feasible"] = false;
                j["reason"] = theta.reason;
            } else {
                json slacks = json::array();
                for (const auto& s : theta.slacks)
                    slacks.push_back({{"label", s.label}, {"slack_at_theta", s.slack_at_theta.str()}, {"slack_rate", s.slack_rate.str()}});
                j["feasible"] = true;
                j["theta"] = theta.theta.str();
                j["binding"] = theta.binding_constraint;
                j["corollary_exponent"] = theta.theta < Rational(1) ? corollary_exponent(theta.theta).str() : "1/1";
                j["slacks"] = slacks;
            }
            o << j.dump(2) << '\n';
        } else if (*vc) {
            o << to_json(verify_choices(parse_rational_arg(vc_rho, "--rho"))).dump(2) << '\n';
        } else if (*ls) {
            const Modulus mod = factor_modulus(ls_q);
            json arr = json::array();
            if (ls_a == "all") {
                const auto least = least_squarefree_all(mod, mobius_sieve(std::max<u64>(64, 32 * ls_q)));
                for (u64 r = 0; r < mod.q; ++r)
                    if (least[r] != 0) arr.push_back({{"a", r}, {"n", least[r]}});
            } else {
                const i64 a = static_cast<i64>(detail::parse_int128(ls_a));
                arr.push_back({{"a", normalize_residue(a, mod.q)}, {"n", least_squarefree(mod, a)}});
            }
            o << json{{"q", mod.q}, {"least", arr}}.dump(2) << '\n';
        } else if (*fc) {
            o << to_json(factor_modulus(fc_q)).dump(2) << '\n';
        } else if (*sv) {
            if (sv_start < 1) throw input_error("--start must be >= 1");
            const u64 last = sv_length == 0 ? sv_start : sv_start + sv_length - 1;
            const auto w = mobius_segment(sv_start, sv_length, primes_up_to(isqrt(last) + 1));
            if (sv_values) {
                o << "n,mu\n";
                for (u64 i = 0; i < w.length(); ++i) o << w.start() + i << ',' << static_cast<int>(w.values()[i]) << '\n';
            } else {
                i64 mertens = 0;
                u64 sqfree = 0;
                for (auto m : w.values()) {
                    mertens += m;
                    sqfree += m != 0;
                }
                o << json{{"start", sv_start}, {"length", sv_length}, {"sum_mu", mertens}, {"squarefree", sqfree}}.dump(2) << '\n';
            }
        }
        o.flush();
    } catch (const input_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const invariant_error& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}

}  // namespace sqfap::cli
