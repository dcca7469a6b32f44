#include "lipsharp/cube_tree.hpp"

#include <stdexcept>

namespace lipsharp::cubetree {

DyadicCube root_cube(const ParamSequence& p) {
    DyadicCube q;
    q.level = 0;
    q.half_side_exp = p.j(0);
    q.center.assign(p.dim(), Dyadic(0));
    return q;
}

DyadicCube child_cube(const DyadicCube& parent, const std::vector<BigInt>& offset,
                      const ParamSequence& p) {
    if (static_cast<int>(offset.size()) != p.dim())
        throw std::invalid_argument("child_cube: offset dimension");
    DyadicCube q;
    q.level = parent.level + 1;
    q.half_side_exp = p.j(q.level);
    q.center.resize(p.dim());
    for (int d = 0; d < p.dim(); ++d)
        q.center[d] = parent.center[d] + Dyadic(offset[d], q.half_side_exp);
    return q;
}

DyadicCube resolve_chain(const CubeChain& chain, const ParamSequence& p) {
    DyadicCube q = root_cube(p);
    for (int n = 0; n < chain.depth(); ++n) {
        if (!is_selected_child(n, chain.offsets[n], p))
            throw std::invalid_argument("resolve_chain: offset violates the selection rule at level " +
                                        std::to_string(n));
        q = child_cube(q, chain.offsets[n], p);
    }
    return q;
}

bool is_selected_child(int parent_level, const std::vector<BigInt>& offset,
                       const ParamSequence& p) {
    const std::int64_t jn = p.j(parent_level);
    const std::int64_t jn1 = p.j(parent_level + 1);
    const std::int64_t ln = p.l(parent_level);
    BigInt ninf = 0;
    for (const auto& c : offset) {
        BigInt a = c < 0 ? BigInt(-c) : c;
        if (a > ninf) ninf = a;
    }
    // |a - a'|_inf = ninf * 2^{-j_{n+1}}; compare exactly in dyadic form.
    const Dyadic dist(ninf, jn1);
    const Dyadic lower = Dyadic(2) * Dyadic::pow2_neg(ln) + Dyadic::pow2_neg(jn1);
    const Dyadic upper = Dyadic::pow2_neg(jn) - Dyadic::pow2_neg(ln) - Dyadic::pow2_neg(jn1);
    return lower <= dist && dist <= upper;
}

InnerCube inner_cube(const DyadicCube& Q, const ParamSequence& p) {
    InnerCube ic;
    ic.center = Q.center;
    ic.half_side_exp = p.l(Q.level);
    return ic;
}

void for_each_selected_child(const DyadicCube& parent, const ParamSequence& p,
                             const std::function<void(const std::vector<BigInt>&)>& fn,
                             std::int64_t max_per_axis) {
    const std::int64_t delta = p.j(parent.level + 1) - p.j(parent.level);
    if (delta >= 63 || (BigInt(1) << static_cast<unsigned>(delta)) > max_per_axis)
        throw std::invalid_argument("for_each_selected_child: subdivision too large to enumerate");
    const std::int64_t half = std::int64_t(1) << delta;  // offsets in {-(half-1), ..., half-1} odd
    std::vector<BigInt> offset(p.dim());
    std::function<void(int)> rec = [&](int d) {
        if (d == p.dim()) {
            if (is_selected_child(parent.level, offset, p)) fn(offset);
            return;
        }
        for (std::int64_t c = -(half - 1); c <= half - 1; c += 2) {
            offset[d] = c;
            rec(d + 1);
        }
    };
    rec(0);
}

namespace {

/// Per-axis child indices whose closed subcube contains x; one index, or two
/// when x sits on a shared face.
void axis_candidates(const Dyadic& x, const Dyadic& parent_center, std::int64_t jn,
                     std::int64_t jn1, std::vector<BigInt>& out) {
    out.clear();
    // s = (x - (c - 2^{-j_n})) / (2 * 2^{-j_{n+1}})  in [0, 2^{delta}]
    const Dyadic lowercorner = parent_center - Dyadic::pow2_neg(jn);
    const Dyadic s = (x - lowercorner) * Dyadic::pow2_pos(jn1 - 1);
    BigInt i = s.floor();
    bool shared_face = s.is_integral();
    const BigInt per_axis = BigInt(1) << static_cast<unsigned>(jn1 - jn);
    if (i >= per_axis) {
        i = per_axis - 1;  // x on the parent's upper face: single candidate
        shared_face = false;
    }
    out.push_back(i);
    if (shared_face && i > 0) out.push_back(i - 1);  // face between subcubes i-1 and i
}

}  // namespace

Location locate(const std::vector<Dyadic>& x, const ParamSequence& p, int max_depth) {
    if (static_cast<int>(x.size()) != p.dim()) throw std::invalid_argument("locate: dimension");
    for (const auto& c : x)
        if (c.abs() > Dyadic(1)) throw std::invalid_argument("locate: x outside [-1,1]^N");

    Location loc;
    DyadicCube q = root_cube(p);
    for (int n = 0; n <= max_depth; ++n) {
        // inside I_Q?
        Dyadic dinf(0);
        for (int d = 0; d < p.dim(); ++d) {
            const Dyadic a = (x[d] - q.center[d]).abs();
            if (a > dinf) dinf = a;
        }
        if (dinf <= Dyadic::pow2_neg(p.l(n))) {
            loc.kind = Location::Kind::InInner;
            loc.level = n;
            return loc;
        }
        if (n == max_depth) break;
        // candidate children whose closed cube contains x, lexicographic order
        const std::int64_t jn = p.j(n), jn1 = p.j(n + 1);
        std::vector<std::vector<BigInt>> per_axis(p.dim());
        for (int d = 0; d < p.dim(); ++d)
            axis_candidates(x[d], q.center[d], jn, jn1, per_axis[d]);
        std::vector<BigInt> chosen;
        std::vector<BigInt> idx(p.dim());
        std::vector<std::size_t> pick(p.dim(), 0);
        bool found = false;
        // at most 2^N combinations
        while (true) {
            for (int d = 0; d < p.dim(); ++d) idx[d] = per_axis[d][pick[d]];
            // index -> offset: c = 2 i + 1 - 2^{delta}
            std::vector<BigInt> off(p.dim());
            const BigInt shift = BigInt(1) << static_cast<unsigned>(jn1 - jn);
            for (int d = 0; d < p.dim(); ++d) off[d] = 2 * idx[d] + 1 - shift;
            if (is_selected_child(n, off, p)) {
                chosen = off;
                found = true;
                break;
            }
            int d = p.dim() - 1;
            while (d >= 0 && pick[d] + 1 >= per_axis[d].size()) {
                pick[d] = 0;
                --d;
            }
            if (d < 0) break;
            ++pick[d];
        }
        if (!found) {
            loc.kind = Location::Kind::Escaped;
            loc.level = n;
            return loc;
        }
        loc.chain.offsets.push_back(chosen);
        q = child_cube(q, chosen, p);
    }
    loc.kind = Location::Kind::Deep;
    loc.level = max_depth;
    return loc;
}

Dyadic generation_measure(int n, const ParamSequence& p) {
    Dyadic m = Dyadic::pow2_pos(p.dim());  // 2^N
    for (int i = 0; i < n; ++i) {
        const std::int64_t gap = p.l(i) - p.j(i);  // l_i > j_i
        const Dyadic r = Dyadic::pow2_neg(gap);
        const Dyadic factor = (Dyadic(1) - r).pow(static_cast<unsigned>(p.dim())) -
                              (Dyadic(2) * r).pow(static_cast<unsigned>(p.dim()));
        m = m * factor;
    }
    return m;
}

bool measure_lower_bound_holds(const ParamSequence& p, int depth) {
    // generation_measure(n) > 2^N e^{-2}  <=>  prod factors > e^{-2}, exact.
    for (int n = 0; n <= depth; ++n) {
        Dyadic prod(1);
        for (int i = 0; i < n; ++i) {
            const Dyadic r = Dyadic::pow2_neg(p.l(i) - p.j(i));
            prod = prod * ((Dyadic(1) - r).pow(static_cast<unsigned>(p.dim())) -
                           (Dyadic(2) * r).pow(static_cast<unsigned>(p.dim())));
        }
        if (prod.sign() <= 0 || num::cmp_exp_neg(prod, Dyadic(2)) <= 0) return false;
    }
    return true;
}

CubeChain random_selected_chain(const ParamSequence& p, int depth, std::mt19937_64& rng) {
    CubeChain chain;
    for (int n = 0; n < depth; ++n) {
        const std::int64_t delta = p.j(n + 1) - p.j(n);
        std::vector<BigInt> off(p.dim());
        for (int attempt = 0; attempt < 100000; ++attempt) {
            for (int d = 0; d < p.dim(); ++d) {
                // uniform odd offset in [-(2^delta - 1), 2^delta - 1]
                BigInt raw = 0;
                std::int64_t bits = delta;
                while (bits > 0) {
                    const int take = static_cast<int>(std::min<std::int64_t>(bits, 63));
                    raw <<= take;
                    raw += BigInt(rng() & ((std::uint64_t(1) << take) - 1));
                    bits -= take;
                }
                // raw in [0, 2^delta): index -> odd offset 2*raw + 1 - 2^delta
                off[d] = 2 * raw + 1 - (BigInt(1) << static_cast<unsigned>(delta));
            }
            if (is_selected_child(n, off, p)) break;
            if (attempt == 99999)
                throw std::runtime_error("random_selected_chain: rejection sampling starved");
        }
        chain.offsets.push_back(off);
    }
    return chain;
}

}  // namespace lipsharp::cubetree
