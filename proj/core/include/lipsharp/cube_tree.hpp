#pragma once

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "lipsharp/dyadic.hpp"
#include "lipsharp/params.hpp"

namespace lipsharp::cubetree {

/// A dyadic cube of the construction: level n, half-side 2^{-j_n}, center
/// coordinates exact dyadic rationals representable at exponent j_n.
/// The root is level 0, center 0, half-side 1 (inside [-1,1]^N).
struct DyadicCube {
    int level = 0;
    std::int64_t half_side_exp = 0;  // j_n
    std::vector<Dyadic> center;
};

/// Canonical root-to-leaf address: one integer offset vector per level, in
/// units of 2^{-j_{n+1}} relative to the parent center. Offsets are odd.
/// Generations are never materialized; chains are the only handles.
struct CubeChain {
    std::vector<std::vector<BigInt>> offsets;
    int depth() const { return static_cast<int>(offsets.size()); }
};

DyadicCube root_cube(const ParamSequence& p);

/// Child cube of `parent` at the given integer offset vector.
DyadicCube child_cube(const DyadicCube& parent, const std::vector<BigInt>& offset,
                      const ParamSequence& p);

/// Resolves a chain to the cube it addresses. Throws if an offset violates
/// the selection rule.
DyadicCube resolve_chain(const CubeChain& chain, const ParamSequence& p);

/// Selection rule of the construction, exact:
///   2 * 2^{-l_n} + 2^{-j_{n+1}}  <=  |a - a'|_inf  <=  2^{-j_n} - 2^{-l_n} - 2^{-j_{n+1}}.
/// `offset` indexes a subcube of side 2 * 2^{-j_{n+1}} inside the level-n parent.
bool is_selected_child(int parent_level, const std::vector<BigInt>& offset,
                       const ParamSequence& p);

/// Concentric inner cube I_Q: same center, half-side 2^{-l_n} (closed).
struct InnerCube {
    std::vector<Dyadic> center;
    std::int64_t half_side_exp = 0;  // l_n
};
InnerCube inner_cube(const DyadicCube& Q, const ParamSequence& p);

/// card(Q(Q)) for a level-n cube: A^N - B^N per-axis counting, clamped exact.
inline BigInt children_count(int n, const ParamSequence& p) { return p.children_per_cube(n); }

/// Exhaustive enumeration of selected children (relaxed-scale oracle; throws
/// if the per-axis subdivision exceeds `max_per_axis`).
void for_each_selected_child(const DyadicCube& parent, const ParamSequence& p,
                             const std::function<void(const std::vector<BigInt>&)>& fn,
                             std::int64_t max_per_axis = 4096);

/// Point classification for the partition into F (escaped) and I (deep).
struct Location {
    enum class Kind { InInner, Escaped, Deep } kind = Kind::Escaped;
    int level = 0;        // InInner: level of Q with x in I_Q; Escaped: last level containing x;
                          // Deep: max_depth reached
    CubeChain chain;      // selected cubes containing x, down to `level`
};

/// Walks the selected-cube tree with exact dyadic arithmetic. Points on
/// shared faces descend into the first selected candidate in canonical
/// (floor-index-first) order; face points selected at every level classify
/// Deep.
Location locate(const std::vector<Dyadic>& x, const ParamSequence& p, int max_depth);

/// H^N of the union of generation-n cubes, exact:
///   2^N * prod_{i<n} ((1 - 2^{j_i - l_i})^N - (2 * 2^{j_i - l_i})^N).
Dyadic generation_measure(int n, const ParamSequence& p);

/// True iff every strict-mode partial product stays above e^{-2}, i.e.
/// generation_measure(n) > 2^N e^{-2} for all n <= depth (exact comparison).
bool measure_lower_bound_holds(const ParamSequence& p, int depth);

/// Uniformly random selected chain to the given depth (rejection sampling on
/// the per-axis offset box; deterministic in the seeded engine).
CubeChain random_selected_chain(const ParamSequence& p, int depth, std::mt19937_64& rng);

}  // namespace lipsharp::cubetree
