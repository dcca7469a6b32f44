#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lipsharp/dyadic.hpp"
#include "lipsharp/exp2.hpp"

namespace lipsharp::cubetree {

using num::BigInt;
using num::Dyadic;
using num::Exp2;

enum class Mode { Strict, Relaxed };

/// The sequences j_n, k_n, l_n, a_n, eps_n driving the nested cube
/// construction, with the constraints as testable data.
///
/// Strict mode enforces
///   j_0 = 0,  j_n = 0 mod 3,  j_{n+1} >= 9(j_n + 1),
///   k_n = 2 j_n / 3,          l_n = j_{n+1}/3 + 2 j_n/3 + 1,
///   2^{j_n - l_n} <= a_n,     (1 - a_n)^N - (2 a_n)^N > e^{-2^{-n}},
///   card(Q_n) * eps_n <= 2^{-n}.
/// Relaxed mode keeps only the derivations of k and l (and j_n = 0 mod 3 so
/// they stay integral) and flags the skipped constraints, enabling tiny
/// instances for exhaustive geometry oracles.
class ParamSequence {
  public:
    ParamSequence(int N, std::vector<std::int64_t> j, Mode mode);

    /// Smallest strict-mode instance: j = (0, 9, 90, 819), n_max = 3.
    static ParamSequence default_strict(int N);

    int dim() const { return N_; }
    Mode mode() const { return mode_; }
    int n_max() const { return static_cast<int>(j_.size()) - 1; }

    /// j_n; extends the sequence canonically when n exceeds the stored range.
    std::int64_t j(int n) const {
        extend_to(n);
        return j_[n];
    }
    std::int64_t k(int n) const { return 2 * j(n) / 3; }
    /// l_n requires j_{n+1}; extends the sequence canonically if needed.
    std::int64_t l(int n) const;
    /// a_n = 2^{-a_exp(n)}, the largest dyadic power passing the product lemma.
    std::int64_t a_exp(int n) const;
    Dyadic a(int n) const { return Dyadic::pow2_neg(a_exp(n)); }

    /// Number of selected children of one level-n cube (exact).
    const BigInt& children_per_cube(int n) const;
    /// card(Q_n), exact.
    const BigInt& cardinality(int n) const;
    /// eps_n = 2^{-n} / card(Q_n) exactly; Exp2 value rounded down.
    Exp2 eps(int n) const;

    /// Extends j canonically by j_{n+1} = 9(j_n + 1) up to the given depth.
    void extend_to(int depth) const;

    const std::vector<std::int64_t>& j_seq() const { return j_; }

  private:
    int N_;
    Mode mode_;
    mutable std::vector<std::int64_t> j_;
    mutable std::vector<std::int64_t> a_exp_;
    mutable std::vector<BigInt> children_;  // children_[n] = per-cube count at level n
    mutable std::vector<BigInt> card_;      // card_[n] = card(Q_n)
    void ensure_children(int n) const;
};

/// Largest a_n = 2^{-m} with (1 - a_n)^N - (2 a_n)^N > e^{-2^{-n}}, decided
/// in exact arithmetic. Deterministic; such m always exists.
std::int64_t choose_a_exp(int n, int N);
inline Dyadic choose_a(int n, int N) { return Dyadic::pow2_neg(choose_a_exp(n, N)); }

struct Violation {
    std::string constraint;
    int level = -1;
    std::string detail;
};

/// Checks every strict-mode invariant (strict) or the internal k/l
/// consistency only (relaxed; skipped paper constraints are flagged as
/// "skipped:" entries). Violations are data, not errors.
std::vector<Violation> validate_params(const ParamSequence& p);

}  // namespace lipsharp::cubetree
