#pragma once

/// @file exponent.hpp
/// @brief Exact exponent bookkeeping in the normalized variables
/// m = log_X M, n = log_X N, ρ = log_X q.
///
/// A term X^{c_x} q^{c_ρ} is the linear form c_x + c_ρ·ρ. Multiplying terms
/// adds forms; ε and constant factors such as the 2 in M₀ = 2·max(...) have
/// exponent zero and only show up as strictness of inequalities.

#include <algorithm>
#include <array>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sqfap/error.hpp"
#include "sqfap/rational.hpp"

namespace sqfap {

struct ExponentForm {
    Rational coeff_x;
    Rational coeff_rho;
    std::string label;

    Rational at(const Rational& rho) const { return coeff_x + coeff_rho * rho; }

    friend ExponentForm operator+(const ExponentForm& a, const ExponentForm& b) {
        return {a.coeff_x + b.coeff_x, a.coeff_rho + b.coeff_rho, a.label + "*" + b.label};
    }
    friend ExponentForm operator*(const Rational& k, const ExponentForm& f) {
        return {k * f.coeff_x, k * f.coeff_rho, f.label};
    }
    bool same_value(const ExponentForm& o) const { return coeff_x == o.coeff_x && coeff_rho == o.coeff_rho; }
};

/// Human-readable X^{..} q^{..}.
inline std::string describe(const ExponentForm& f) {
    return "X^(" + f.coeff_x.str() + ") q^(" + f.coeff_rho.str() + ")";
}

// ---------------------------------------------------------------------------
// α-interpolation

/// Exponents (of M, of N) of a bound M^e N^f.
struct ExponentPair {
    Rational m;
    Rational n;
    friend bool operator==(const ExponentPair&, const ExponentPair&) = default;
};

struct AlphaResult {
    bool feasible = false;
    bool degenerate = false;  ///< endpoints identical, α arbitrary
    Rational alpha;
    Rational uniform_exponent;  ///< c with interpolated bound = (MN²)^c
    std::string reason;
};

/// α with N-exponent = 2·M-exponent for (pair1)^α (pair2)^{1-α}, so the
/// interpolated bound is a power of MN². Identical endpoints return α = 1/2
/// and c = max(e_m, e_n/2), the least c with M^{e_m}N^{e_n} <= (MN²)^c.
inline AlphaResult best_alpha(const ExponentPair& p1, const ExponentPair& p2) {
    AlphaResult r;
    if (p1 == p2) {
        r.feasible = true;
        r.degenerate = true;
        r.alpha = Rational(1, 2);
        r.uniform_exponent = max(p1.m, p1.n / Rational(2));
        return r;
    }
    // α(n1 − n2 − 2 m1 + 2 m2) = 2 m2 − n2
    const Rational coef = p1.n - p2.n - Rational(2) * p1.m + Rational(2) * p2.m;
    const Rational rhs = Rational(2) * p2.m - p2.n;
    if (coef == Rational(0)) {
        r.reason = rhs == Rational(0) ? "every alpha is proportional; endpoints already powers of MN^2"
                                       : "no alpha makes the bound a power of MN^2";
        if (rhs == Rational(0)) {
            r.feasible = true;
            r.degenerate = true;
            r.alpha = Rational(1, 2);
            r.uniform_exponent = r.alpha * p1.m + (Rational(1) - r.alpha) * p2.m;
        }
        return r;
    }
    const Rational alpha = rhs / coef;
    if (alpha < Rational(0) || alpha > Rational(1)) {
        r.reason = "proportional alpha " + alpha.str() + " lies outside [0,1]";
        return r;
    }
    r.feasible = true;
    r.alpha = alpha;
    r.uniform_exponent = alpha * p1.m + (Rational(1) - alpha) * p2.m;
    return r;
}

// ---------------------------------------------------------------------------
// Linear optimization over a box polygon in (m, n)

/// c_m·m + c_n·n <= rhs, with rhs a form in (x, ρ).
struct LinearConstraint {
    Rational c_m;
    Rational c_n;
    ExponentForm rhs;
    std::string label;
};

struct SupResult {
    bool feasible = false;
    ExponentForm value;     ///< sup as a form in (x, ρ)
    ExponentForm vertex_m;  ///< optimal m as a form
    ExponentForm vertex_n;
    std::array<std::string, 2> binding;
    Rational value_at_rho;  ///< value evaluated at the probe ρ
};

/// Maximizes objective_m·m + objective_n·n (+ objective_const) over the
/// polygon at a probe ρ (x normalized to 1) by exact vertex enumeration. The
/// optimal vertex is reported symbolically from its two binding constraints,
/// so the returned form is valid on the whole ρ-interval where the same pair
/// binds. Throws if the objective is unbounded.
inline SupResult sup_box_exponent(const Rational& objective_m, const Rational& objective_n,
                                  const std::vector<LinearConstraint>& constraints, const Rational& rho,
                                  const ExponentForm& objective_const = {}) {
    const Rational one(1);
    auto rhs_at = [&](const LinearConstraint& c) { return c.rhs.coeff_x * one + c.rhs.coeff_rho * rho; };

    // Guard box catches unbounded directions; a guard-bound optimum whose value
    // moves when the guard moves is unbounded.
    auto solve = [&](const Rational& guard) -> std::optional<SupResult> {
        std::vector<LinearConstraint> all = constraints;
        all.push_back({1, 0, {guard, 0, "guard"}, "guard"});
        all.push_back({-1, 0, {guard, 0, "guard"}, "guard"});
        all.push_back({0, 1, {guard, 0, "guard"}, "guard"});
        all.push_back({0, -1, {guard, 0, "guard"}, "guard"});
        std::optional<SupResult> best;
        bool best_uses_guard = true;
        for (std::size_t i = 0; i < all.size(); ++i) {
            for (std::size_t j = i + 1; j < all.size(); ++j) {
                const auto& ci = all[i];
                const auto& cj = all[j];
                const Rational det = ci.c_m * cj.c_n - ci.c_n * cj.c_m;
                if (det == Rational(0)) continue;
                // Cramer's rule, kept symbolic in (x, ρ).
                const ExponentForm vm{(ci.rhs.coeff_x * cj.c_n - cj.rhs.coeff_x * ci.c_n) / det,
                                      (ci.rhs.coeff_rho * cj.c_n - cj.rhs.coeff_rho * ci.c_n) / det, "m"};
                const ExponentForm vn{(ci.c_m * cj.rhs.coeff_x - cj.c_m * ci.rhs.coeff_x) / det,
                                      (ci.c_m * cj.rhs.coeff_rho - cj.c_m * ci.rhs.coeff_rho) / det, "n"};
                const Rational m = vm.at(rho), n = vn.at(rho);
                bool inside = true;
                for (const auto& c : all) {
                    if (c.c_m * m + c.c_n * n > rhs_at(c)) {
                        inside = false;
                        break;
                    }
                }
                if (!inside) continue;
                const Rational value = objective_m * m + objective_n * n + objective_const.at(rho);
                const bool uses_guard = ci.label == "guard" || cj.label == "guard";
                const bool better = !best || value > best->value_at_rho ||
                                    (value == best->value_at_rho && best_uses_guard && !uses_guard);
                if (!better) continue;
                SupResult r;
                r.feasible = true;
                r.vertex_m = vm;
                r.vertex_n = vn;
                r.value = ExponentForm{objective_m * vm.coeff_x + objective_n * vn.coeff_x + objective_const.coeff_x,
                                       objective_m * vm.coeff_rho + objective_n * vn.coeff_rho + objective_const.coeff_rho,
                                       "sup"};
                r.binding = {ci.label, cj.label};
                r.value_at_rho = value;
                best = r;
                best_uses_guard = uses_guard;
            }
        }
        return best;
    };

    const Rational guard(1000);
    auto a = solve(guard);
    if (!a) return SupResult{};
    auto b = solve(guard * Rational(2));
    if (!b || b->value_at_rho != a->value_at_rho)
        throw input_error("sup_box_exponent: objective unbounded on the constraint polygon");
    return *a;
}

/// The region M >= M₀, N >= N₀, MN² <= X with both sides below q^{3/4},
/// as constraints for sup_box_exponent.
inline std::vector<LinearConstraint> cond2_polygon(const ExponentForm& m0, const ExponentForm& n0) {
    return {
        {-1, 0, (-1) * m0, "M>=M0"},
        {0, -1, (-1) * n0, "N>=N0"},
        {1, 2, {1, 0, "X"}, "MN^2<=X"},
        {1, 0, {0, Rational(3, 4), "q^3/4"}, "M<=q^3/4"},
        {0, 1, {0, Rational(3, 4), "q^3/4"}, "N<=q^3/4"},
    };
}

// ---------------------------------------------------------------------------
// Distribution exponent

struct TermSlack {
    std::string label;
    Rational slack_at_theta;  ///< target − term at ρ = Θ
    Rational slack_rate;      ///< d(target − term)/d(−ρ): slack gained per unit of ρ below Θ
};

struct ThetaResult {
    bool feasible = false;
    Rational theta;
    std::string binding_constraint;
    std::vector<TermSlack> slacks;
    std::string reason;
};

/// sup{ρ in [1/2, 1] : every term <= target}. Each term is linear in ρ, so
/// the feasible set is an interval cut out by one inequality per term.
inline ThetaResult compute_theta(const std::vector<ExponentForm>& terms,
                                 const ExponentForm& target = {1, -1, "X/q"}) {
    if (terms.empty()) throw input_error("compute_theta: empty term list");
    ThetaResult r;
    Rational lower(1, 2);
    Rational upper(1);
    std::string binding = "rho<1";
    for (const auto& t : terms) {
        // (t.rho − target.rho)·ρ <= target.x − t.x
        const Rational d = t.coeff_rho - target.coeff_rho;
        const Rational c = target.coeff_x - t.coeff_x;
        if (d == Rational(0)) {
            if (c < Rational(0)) {
                r.reason = "term " + t.label + " exceeds the target for every rho";
                return r;
            }
            continue;
        }
        const Rational bound = c / d;
        if (d > Rational(0)) {
            if (bound < upper) {
                upper = bound;
                binding = t.label;
            }
        } else {
            lower = max(lower, bound);
        }
    }
    if (upper < lower) {
        r.reason = "no rho in [1/2,1] satisfies every term";
        return r;
    }
    r.feasible = true;
    r.theta = upper;
    r.binding_constraint = binding;
    for (const auto& t : terms)
        r.slacks.push_back({t.label, target.at(upper) - t.at(upper), t.coeff_rho - target.coeff_rho});
    return r;
}

/// The three terms left after the parameter choices: X^{11/36}, X q^{-3/2}
/// (from M₀) and X^{1/2} q^{-3/8} (from N₀).
inline std::vector<ExponentForm> standard_menu() {
    return {
        {Rational(11, 36), 0, "X^(11/36)"},
        {1, Rational(-3, 2), "Xq^(-3/2)"},
        {Rational(1, 2), Rational(-3, 8), "X^(1/2)q^(-3/8)"},
    };
}

/// standard_menu plus the constant from max(·,1) in M₀ and the X/(N₀q) term,
/// which never bind.
inline std::vector<ExponentForm> extended_menu() {
    auto m = standard_menu();
    m.push_back({0, 0, "1"});
    m.push_back({Rational(1, 2), Rational(-5, 8), "X/(N0 q)"});
    return m;
}

/// Exploratory: only the M^{2/3}N^{1/4} orientation, no symmetry. Its box
/// supremum over the cond2 polygon is 1/8 + 13ρ/32 when the M <= q^{3/4}
/// facet binds, which caps Θ at 28/45.
inline std::vector<ExponentForm> single_orientation_menu() {
    const ExponentForm m0{1, Rational(-3, 2), "M0"};
    const ExponentForm n0{Rational(1, 2), Rational(-3, 8), "N0"};
    const auto sup = sup_box_exponent(Rational(2, 3), Rational(1, 4), cond2_polygon(m0, n0), Rational(3, 5));
    ExponentForm box = sup.value;
    box.label = "sup M^(2/3)N^(1/4)";
    return {box, {1, Rational(-3, 2), "Xq^(-3/2)"}, {Rational(1, 2), Rational(-3, 8), "X^(1/2)q^(-3/8)"}};
}

// ---------------------------------------------------------------------------
// Parameter feasibility

struct ChoiceCheck {
    std::string label;
    Rational lhs;
    Rational rhs;
    std::string relation;  ///< "<=", "<", ">=" applied as lhs REL rhs
    bool pass = false;
};

struct ChoiceReport {
    Rational rho;
    Rational m0_exponent;  ///< exponent of M₀ = 2·max(Xq^{-3/2}, 1)
    Rational n0_exponent;  ///< exponent of N₀ = 2X^{1/2}q^{-3/8}
    bool floor_branch = false;  ///< M₀ = 2, i.e. Xq^{-3/2} < 1
    Rational max_box_m;
    Rational max_box_n;
    std::vector<ChoiceCheck> checks;
    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const ChoiceCheck& c) { return c.pass; });
    }
};

/// Exponent-level check of the parameter choices at q = X^ρ.
inline ChoiceReport verify_choices(const Rational& rho) {
    if (rho < Rational(1, 2) || rho >= Rational(1)) throw input_error("verify_choices: rho must lie in [1/2, 1)");
    ChoiceReport rep;
    rep.rho = rho;
    const Rational raw_m0 = Rational(1) - Rational(3, 2) * rho;
    rep.floor_branch = raw_m0 < Rational(0);
    rep.m0_exponent = max(raw_m0, Rational(0));
    rep.n0_exponent = Rational(1, 2) - Rational(3, 8) * rho;

    auto add = [&](std::string label, Rational lhs, std::string rel, Rational rhs) {
        bool pass = rel == "<=" ? lhs <= rhs : rel == "<" ? lhs < rhs : lhs >= rhs;
        rep.checks.push_back({std::move(label), lhs, rhs, std::move(rel), pass});
    };
    // The factor 2 makes M₀ > Xq^{-3/2} and N₀ > X^{1/2}q^{-3/8} strict; at
    // exponent level the requirement is >=.
    add("M0 > Xq^(-3/2)", rep.m0_exponent, ">=", raw_m0);
    add("N0 > X^(1/2)q^(-3/8)", rep.n0_exponent, ">=", Rational(1, 2) - Rational(3, 8) * rho);
    add("1 <= M0", rep.m0_exponent, ">=", Rational(0));
    add("M0 <= X", rep.m0_exponent, "<=", Rational(1));
    add("1 <= N0", rep.n0_exponent, ">=", Rational(0));
    add("N0 <= X^(1/2)", rep.n0_exponent, "<=", Rational(1, 2));

    // Largest box sides allowed by cond2 alone (without the q^{3/4} facets).
    const std::vector<LinearConstraint> cond2 = {
        {-1, 0, {-rep.m0_exponent, 0, "m0"}, "M>=M0"},
        {0, -1, {-rep.n0_exponent, 0, "n0"}, "N>=N0"},
        {1, 2, {1, 0, "X"}, "MN^2<=8X"},
    };
    rep.max_box_m = sup_box_exponent(1, 0, cond2, rho).value_at_rho;
    rep.max_box_n = sup_box_exponent(0, 1, cond2, rho).value_at_rho;
    const Rational three_quarter = Rational(3, 4) * rho;
    add("cond2 => M <= q^(3/4)", rep.max_box_m, "<=", three_quarter);
    add("cond2 => N <= q^(3/4)", rep.max_box_n, "<=", three_quarter);
    add("cond2 => N < q/2", rep.max_box_n, "<", rho);
    add("cond2 => M < q/2", rep.max_box_m, "<", rho);
    return rep;
}

/// Exponent of n(q,a) implied by a distribution exponent Θ: 1/Θ.
inline Rational corollary_exponent(const Rational& theta) {
    if (theta <= Rational(0) || theta >= Rational(1)) throw input_error("corollary_exponent: theta must lie in (0,1)");
    return Rational(1) / theta;
}

// ---------------------------------------------------------------------------
// Term menus as text: one "label coeff_x coeff_rho" per line, '#' comments.

inline std::vector<ExponentForm> parse_menu(std::istream& in) {
    std::vector<ExponentForm> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string label, cx, cr, extra;
        if (!(ls >> label)) continue;
        if (!(ls >> cx >> cr) || (ls >> extra))
            throw input_error("menu line " + std::to_string(lineno) + ": expected 'label coeff_x coeff_rho'");
        out.push_back({Rational::parse(cx), Rational::parse(cr), label});
    }
    if (out.empty()) throw input_error("menu has no terms");
    return out;
}

inline std::string format_menu(const std::vector<ExponentForm>& terms) {
    std::string s;
    for (const auto& t : terms) {
        std::string label = t.label;
        std::replace(label.begin(), label.end(), ' ', '_');
        s += label + " " + t.coeff_x.str() + " " + t.coeff_rho.str() + "\n";
    }
    return s;
}

}  // namespace sqfap
