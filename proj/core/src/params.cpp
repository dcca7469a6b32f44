#include "lipsharp/params.hpp"

#include <stdexcept>

namespace lipsharp::cubetree {

std::int64_t choose_a_exp(int n, int N) {
    if (n < 0 || N < 2) throw std::invalid_argument("choose_a: n >= 0, N >= 2");
    const Dyadic x = Dyadic::pow2_neg(n);  // e^{-2^{-n}} threshold exponent
    for (std::int64_t m = 1; m <= 4096; ++m) {
        const Dyadic a = Dyadic::pow2_neg(m);
        const Dyadic expr =
            (Dyadic(1) - a).pow(static_cast<unsigned>(N)) -
            (Dyadic(2) * a).pow(static_cast<unsigned>(N));
        if (expr.sign() > 0 && num::cmp_exp_neg(expr, x) > 0) return m;
    }
    throw std::logic_error("choose_a: no dyadic power found (unreachable)");
}

ParamSequence::ParamSequence(int N, std::vector<std::int64_t> j, Mode mode)
    : N_(N), mode_(mode), j_(std::move(j)) {
    if (N_ < 2) throw std::invalid_argument("ParamSequence: N >= 2");
    if (j_.empty()) throw std::invalid_argument("ParamSequence: empty j sequence");
    for (const auto v : j_)
        if (v < 0 || v % 3 != 0)
            throw std::invalid_argument("ParamSequence: j_n must be nonnegative multiples of 3");
    children_.clear();
    card_.assign(1, BigInt(1));  // card(Q_0) = 1
}

ParamSequence ParamSequence::default_strict(int N) {
    return ParamSequence(N, {0, 9, 90, 819}, Mode::Strict);
}

void ParamSequence::extend_to(int depth) const {
    while (static_cast<int>(j_.size()) <= depth) {
        const std::int64_t next = 9 * (j_.back() + 1);  // = 0 mod 3 automatically
        j_.push_back(next);
    }
}

std::int64_t ParamSequence::l(int n) const {
    extend_to(n + 1);
    return j_[n + 1] / 3 + 2 * j_[n] / 3 + 1;
}

std::int64_t ParamSequence::a_exp(int n) const {
    while (static_cast<int>(a_exp_.size()) <= n)
        a_exp_.push_back(choose_a_exp(static_cast<int>(a_exp_.size()), N_));
    return a_exp_[n];
}

void ParamSequence::ensure_children(int n) const {
    while (static_cast<int>(children_.size()) <= n) {
        const int lev = static_cast<int>(children_.size());
        const std::int64_t jn = j(lev);
        extend_to(lev + 1);
        const std::int64_t jn1 = j_[lev + 1];
        const std::int64_t ln = l(lev);
        // offsets c (odd integers, units of 2^{-j_{n+1}}) with
        //   2^{j_{n+1}-l_n+1} + 1  <=  |c|_inf  <=  2^{j_{n+1}-j_n} - 2^{j_{n+1}-l_n} - 1,
        // counted per axis in exact integer arithmetic. For general (relaxed)
        // parameters the bounds are dyadic; count odd |c| below each.
        const Dyadic unit = Dyadic::pow2_neg(jn1);
        const Dyadic lower = Dyadic(2) * Dyadic::pow2_neg(ln) + unit;
        const Dyadic upper = Dyadic::pow2_neg(jn) - Dyadic::pow2_neg(ln) - unit;
        auto count_odd_le = [](const BigInt& M) -> BigInt {
            if (M < 0) return BigInt(0);
            return 2 * ((M + 1) / 2);
        };
        BigInt A(0), B(0);
        if (upper.sign() >= 0) {
            // scale to units: bound_units = bound * 2^{j_{n+1}}
            const Dyadic up_units = upper * Dyadic::pow2_pos(jn1);
            const BigInt MU = up_units.floor();
            A = count_odd_le(MU);
            const Dyadic lo_units = lower * Dyadic::pow2_pos(jn1);
            BigInt ML = lo_units.floor();
            if (lo_units.is_integral()) ML -= 1;  // strict |c| < lower
            if (ML > MU) ML = MU;                 // intersect with the upper box
            B = count_odd_le(ML);
        }
        BigInt cnt = 1, bnt = 1;
        for (int d = 0; d < N_; ++d) {
            cnt *= A;
            bnt *= B;
        }
        children_.push_back(cnt - bnt);
        card_.push_back(card_.back() * children_.back());
    }
}

const BigInt& ParamSequence::children_per_cube(int n) const {
    ensure_children(n);
    return children_[n];
}

const BigInt& ParamSequence::cardinality(int n) const {
    if (n == 0) return card_[0];
    ensure_children(n - 1);
    return card_[n];
}

Exp2 ParamSequence::eps(int n) const {
    // eps_n = 2^{-n} / card(Q_n), rounded down (safe direction for budgets).
    const BigInt& c = cardinality(n);
    Exp2 inv_card = Dyadic(c, 0).to_exp2();
    Exp2 r = Exp2::pow2(-n) / inv_card;
    r.m = std::nextafter(r.m, 0.0);
    // renormalize in case nextafter left [0.5, 1)
    return Exp2::from_double(r.m) * Exp2::pow2(r.e);
}

std::vector<Violation> validate_params(const ParamSequence& p) {
    std::vector<Violation> out;
    const auto& j = p.j_seq();
    const int n_max = p.n_max();

    if (j[0] != 0) out.push_back({"j0", 0, "j_0 must be 0, got " + std::to_string(j[0])});
    for (int n = 0; n <= n_max; ++n) {
        if (j[n] % 3 != 0)
            out.push_back({"mod3", n, "j_" + std::to_string(n) + " not divisible by 3"});
    }
    for (int n = 0; n + 1 <= n_max; ++n) {
        const bool growth_ok = j[n + 1] >= 9 * (j[n] + 1);
        if (p.mode() == Mode::Strict) {
            if (!growth_ok)
                out.push_back({"factor9", n,
                               "j_" + std::to_string(n + 1) + " < 9(j_" + std::to_string(n) +
                                   "+1) = " + std::to_string(9 * (j[n] + 1))});
        } else {
            out.push_back({"skipped:factor9", n,
                           growth_ok ? "relaxed mode: j_{n+1} >= 9(j_n+1) not enforced (holds)"
                                     : "relaxed mode: j_{n+1} >= 9(j_n+1) not enforced (fails)"});
        }
    }
    for (int n = 0; n + 1 <= n_max; ++n) {
        // k, l derivations are structural (computed, not stored); check ranges.
        if (p.l(n) <= p.j(n))
            out.push_back({"l_order", n, "l_n <= j_n: inner cube not smaller than parent"});
        if (p.l(n) >= p.j(n + 1))
            out.push_back({p.mode() == Mode::Strict ? "l_vs_next" : "skipped:l_vs_next", n,
                           "l_n >= j_{n+1}: children thinner than the selection gap"});
    }
    for (int n = 0; n + 1 <= n_max; ++n) {
        // growth inequality 2^{j_n - l_n} <= a_n  <=>  l_n - j_n >= a_exp(n)
        const bool ok = p.l(n) - p.j(n) >= p.a_exp(n);
        if (p.mode() == Mode::Strict) {
            if (!ok)
                out.push_back({"growth", n,
                               "2^{j_n-l_n} > a_n (l_n - j_n = " + std::to_string(p.l(n) - p.j(n)) +
                                   ", a_exp = " + std::to_string(p.a_exp(n)) + ")"});
        } else {
            out.push_back({"skipped:growth", n,
                           ok ? "relaxed mode: 2^{j_n-l_n} <= a_n not enforced (holds)"
                              : "relaxed mode: 2^{j_n-l_n} <= a_n not enforced (fails)"});
        }
        // Lemma inequality for a_n holds by construction of choose_a; re-check.
        const Dyadic a = p.a(n);
        const Dyadic expr = (Dyadic(1) - a).pow(static_cast<unsigned>(p.dim())) -
                            (Dyadic(2) * a).pow(static_cast<unsigned>(p.dim()));
        if (!(expr.sign() > 0 && num::cmp_exp_neg(expr, Dyadic::pow2_neg(n)) > 0))
            out.push_back({"lemma_a", n, "(1-a_n)^N - (2a_n)^N <= e^{-2^{-n}}"});
    }
    if (p.mode() == Mode::Strict) {
        for (int n = 0; n + 1 <= n_max; ++n) {
            if (p.children_per_cube(n) <= 0)
                out.push_back({"nonempty", n, "selection rule admits no children"});
        }
        // card(Q_n) * eps_n <= 2^{-n} holds exactly by construction of eps;
        // recorded as a checked constraint for the manifest.
    }
    return out;
}

}  // namespace lipsharp::cubetree
