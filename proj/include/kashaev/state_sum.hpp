/**
 * @file state_sum.hpp
 * @brief ⟨K⟩_N as a sum over edge labelings of a (1,1)-tangle diagram.
 *
 * Four independent evaluations:
 *   brute_force_sum  every labeling, literal weight product
 *   pruned_sum       only labelings passing the three angle conditions
 *   sweep_sum        dense top-down StateVector sweep, slice by slice
 *   state_sum        tensor-network contraction of the labeled graph
 *
 * All return the raw value; the invariant is defined up to a power of q.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "kashaev/diagram.hpp"
#include "kashaev/errors.hpp"
#include "kashaev/qkernel.hpp"
#include "kashaev/yang_baxter.hpp"

namespace kashaev {

/// Label per edge id of a DiagramGraph.
using Labeling = std::vector<int>;

inline constexpr std::uint64_t kDefaultLabelingBudget = 50'000'000;
inline constexpr std::uint64_t kDefaultTensorBudget = std::uint64_t{1} << 26;

/// Angles of a crossing indexed by Corner: north [k-n], east [n-m], south [m-l-1], west [l-k].
inline std::array<int, 4> crossing_angles(const QContext& ctx, int k, int n, int l, int m) {
  return {ctx.residue(k - n), ctx.residue(n - m), ctx.residue(m - l - 1), ctx.residue(l - k)};
}

inline cplx weight(const QContext& ctx, const DiagramGraph& g, const Labeling& lab) {
  cplx w = 1.0;
  for (const CrossingSite& c : g.crossings) {
    w *= r_entry(ctx, lab[c.edges[0]], lab[c.edges[1]], lab[c.edges[2]], lab[c.edges[3]], c.sign);
    if (w == 0.0) return w;
  }
  for (const ExtremumSite& e : g.extrema) {
    w *= mu_entry(ctx, lab[e.right_edge], lab[e.left_edge], e.sign);
  }
  return w;
}

struct AngleConditions {
  bool crossing_sums = false;   // (1) angles around every crossing sum to N-1
  bool bounded_regions = false; // (2) angles in every bounded region sum to N-1
  bool unbounded_zero = false;  // (3) every angle in an unbounded region is 0

  bool all() const { return crossing_sums && bounded_regions && unbounded_zero; }
};

inline AngleConditions check_angle_conditions(const QContext& ctx, const DiagramGraph& g,
                                              const RegionData& regions, const Labeling& lab) {
  const int target = ctx.N() - 1;
  std::vector<std::array<int, 4>> angles;
  angles.reserve(g.crossings.size());
  AngleConditions out{true, true, true};
  for (const CrossingSite& c : g.crossings) {
    angles.push_back(
        crossing_angles(ctx, lab[c.edges[0]], lab[c.edges[1]], lab[c.edges[2]], lab[c.edges[3]]));
    const auto& a = angles.back();
    if (a[0] + a[1] + a[2] + a[3] != target) out.crossing_sums = false;
  }
  for (const Region& r : regions.regions) {
    int sum = 0;
    for (const AngleSlot& s : r.slots) {
      const int a = angles[s.crossing][static_cast<int>(s.corner)];
      sum += a;
      if (!r.bounded && a != 0) out.unbounded_zero = false;
    }
    if (r.bounded && sum != target) out.bounded_regions = false;
  }
  return out;
}

inline AngleConditions check_angle_conditions(const QContext& ctx, const TangleDiagram& d,
                                              const Labeling& lab) {
  const DiagramGraph g = build_graph(d);
  return check_angle_conditions(ctx, g, derive_regions(g), lab);
}

namespace detail {

inline std::uint64_t checked_power(std::uint64_t base, int exp, std::uint64_t budget,
                                   const char* what) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > budget / base) {
      throw BudgetExceeded(std::string(what) + ": " + std::to_string(base) + "^" +
                           std::to_string(exp) + " exceeds budget " + std::to_string(budget));
    }
    out *= base;
  }
  return out;
}

// Odometer over the given positions of a labeling, last position fastest.
inline bool advance(Labeling& lab, const std::vector<int>& positions, int n) {
  for (auto it = positions.rbegin(); it != positions.rend(); ++it) {
    if (++lab[*it] < n) return true;
    lab[*it] = 0;
  }
  return false;
}

}  // namespace detail

/// Literal sum over all labelings with the two open ends labeled 0.
inline cplx brute_force_sum(const QContext& ctx, const TangleDiagram& d,
                            std::uint64_t budget = kDefaultLabelingBudget) {
  const DiagramGraph g = build_graph(d);
  std::vector<int> free_edges;
  for (int e = 0; e < g.edge_count; ++e) {
    if (e != g.start_edge && e != g.end_edge) free_edges.push_back(e);
  }
  detail::checked_power(ctx.N(), static_cast<int>(free_edges.size()), budget, "brute_force_sum");
  Labeling lab(g.edge_count, 0);
  cplx total = 0.0;
  do {
    total += weight(ctx, g, lab);
  } while (detail::advance(lab, free_edges, ctx.N()));
  return total;
}

struct PrunedSum {
  cplx value;
  std::uint64_t survivors = 0;  // labelings passing all three conditions
  double total = 0.0;           // labelings with the open ends at 0
  double ratio = 0.0;           // survivors / total
};

/**
 * Sum restricted to labelings satisfying the angle conditions. Condition (3)
 * is a set of equalities between labels (up to a constant offset), so it is
 * imposed by union-find before enumeration; (1) and (2) filter the rest.
 */
inline PrunedSum pruned_sum(const QContext& ctx, const TangleDiagram& d,
                            std::uint64_t budget = kDefaultLabelingBudget) {
  const int n = ctx.N();
  const DiagramGraph g = build_graph(d);
  const RegionData regions = derive_regions(g);

  // Offset union-find: label[x] = label[parent[x]] + offset[x] (mod N).
  const int zero = g.edge_count;
  std::vector<int> parent(g.edge_count + 1);
  std::vector<int> offset(g.edge_count + 1, 0);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    int acc = 0;
    int r = x;
    while (parent[r] != r) {
      acc += offset[r];
      r = parent[r];
    }
    // Path compression with accumulated offsets.
    int cur = x;
    int rem = acc;
    while (parent[cur] != cur) {
      const int next = parent[cur];
      const int step = offset[cur];
      parent[cur] = r;
      offset[cur] = ctx.residue(rem);
      rem -= step;
      cur = next;
    }
    return std::pair<int, int>{r, ctx.residue(acc)};
  };
  bool consistent = true;
  // Impose label[a] = label[b] + delta.
  auto relate = [&](int a, int b, int delta) {
    const auto [ra, oa] = find(a);
    const auto [rb, ob] = find(b);
    if (ra == rb) {
      if (ctx.residue(oa - ob - delta) != 0) consistent = false;
      return;
    }
    // Keep the zero node as a root so its class stays pinned.
    if (ra == zero) {
      parent[rb] = ra;
      offset[rb] = ctx.residue(oa - ob - delta);
    } else {
      parent[ra] = rb;
      offset[ra] = ctx.residue(ob + delta - oa);
    }
  };
  relate(g.start_edge, zero, 0);
  relate(g.end_edge, zero, 0);
  for (const CrossingSite& c : g.crossings) {
    const int k = c.edges[0], nn = c.edges[1], l = c.edges[2], m = c.edges[3];
    if (g.unbounded(c.regions[0])) relate(k, nn, 0);
    if (g.unbounded(c.regions[1])) relate(nn, m, 0);
    if (g.unbounded(c.regions[2])) relate(m, l, 1);
    if (g.unbounded(c.regions[3])) relate(l, k, 0);
  }

  PrunedSum out;
  out.total = std::pow(static_cast<double>(n), g.edge_count - (g.start_edge == g.end_edge ? 1 : 2));
  if (!consistent) return out;

  std::vector<int> roots;
  for (int e = 0; e < g.edge_count; ++e) {
    const int r = find(e).first;
    if (r != zero && std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
  }
  detail::checked_power(n, static_cast<int>(roots.size()), budget, "pruned_sum");

  // Root values live in slots of an extended labeling; edges read them through offsets.
  Labeling root_values(g.edge_count + 1, 0);
  Labeling lab(g.edge_count, 0);
  std::vector<std::pair<int, int>> resolved(g.edge_count);
  for (int e = 0; e < g.edge_count; ++e) resolved[e] = find(e);
  do {
    for (int e = 0; e < g.edge_count; ++e) {
      lab[e] = ctx.residue(root_values[resolved[e].first] + resolved[e].second);
    }
    if (!check_angle_conditions(ctx, g, regions, lab).all()) continue;
    ++out.survivors;
    out.value += weight(ctx, g, lab);
  } while (detail::advance(root_values, roots, n));
  out.ratio = out.total > 0 ? static_cast<double>(out.survivors) / out.total : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Dense StateVector sweep

/// Amplitudes over the labels of the current strands; strand 0 is the most
/// significant digit of the mixed-radix index.
struct StateVector {
  int width = 0;
  std::vector<cplx> amplitudes;
};

inline cplx sweep_sum(const QContext& ctx, const TangleDiagram& d,
                      std::uint64_t budget = kDefaultTensorBudget) {
  const int n = ctx.N();
  detail::checked_power(n, d.max_width(), budget, "sweep_sum");

  std::vector<std::uint64_t> pw(d.max_width() + 1, 1);
  for (std::size_t i = 1; i < pw.size(); ++i) pw[i] = pw[i - 1] * n;

  StateVector s{1, std::vector<cplx>(n, 0.0)};
  s.amplitudes[0] = 1.0;
  for (const Event& ev : d.events()) {
    const int i = ev.at;
    if (is_crossing(ev.kind)) {
      const Sign sign = ev.kind == EventKind::pos_cross ? Sign::positive : Sign::negative;
      const std::uint64_t pre = pw[i], post = pw[s.width - i - 2];
      std::vector<cplx> r(n * n * n * n);  // r[(l*n+m)*n*n + k*n+nn]
      for (int k = 0; k < n; ++k)
        for (int nn = 0; nn < n; ++nn)
          for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m)
              r[(l * n + m) * n * n + k * n + nn] = r_entry(ctx, k, nn, l, m, sign);
      std::vector<cplx> next(s.amplitudes.size(), 0.0);
      for (std::uint64_t a = 0; a < pre; ++a)
        for (int lm = 0; lm < n * n; ++lm)
          for (int kn = 0; kn < n * n; ++kn) {
            const cplx coef = r[lm * n * n + kn];
            if (coef == 0.0) continue;
            const cplx* src = &s.amplitudes[(a * n * n + kn) * post];
            cplx* dst = &next[(a * n * n + lm) * post];
            for (std::uint64_t b = 0; b < post; ++b) dst[b] += coef * src[b];
          }
      s.amplitudes = std::move(next);
    } else if (is_cap(ev.kind)) {
      const std::uint64_t pre = pw[i], post = pw[s.width - i];
      std::vector<cplx> next(s.amplitudes.size() * n * n, 0.0);
      for (std::uint64_t a = 0; a < pre; ++a)
        for (int left = 0; left < n; ++left)
          for (int right = 0; right < n; ++right) {
            const cplx coef = ev.kind == EventKind::cap_lr
                                  ? mu_entry(ctx, right, left, Sign::negative)
                                  : cplx(left == right ? 1.0 : 0.0);
            if (coef == 0.0) continue;
            const cplx* src = &s.amplitudes[a * post];
            cplx* dst = &next[((a * n + left) * n + right) * post];
            for (std::uint64_t b = 0; b < post; ++b) dst[b] = coef * src[b];
          }
      s.amplitudes = std::move(next);
      s.width += 2;
    } else {
      const std::uint64_t pre = pw[i], post = pw[s.width - i - 2];
      std::vector<cplx> next(s.amplitudes.size() / (n * n), 0.0);
      for (std::uint64_t a = 0; a < pre; ++a)
        for (int left = 0; left < n; ++left)
          for (int right = 0; right < n; ++right) {
            const cplx coef = ev.kind == EventKind::cup_lr
                                  ? mu_entry(ctx, right, left, Sign::positive)
                                  : cplx(left == right ? 1.0 : 0.0);
            if (coef == 0.0) continue;
            const cplx* src = &s.amplitudes[((a * n + left) * n + right) * post];
            cplx* dst = &next[a * post];
            for (std::uint64_t b = 0; b < post; ++b) dst[b] += coef * src[b];
          }
      s.amplitudes = std::move(next);
      s.width -= 2;
    }
  }
  return s.amplitudes[0];
}

// ---------------------------------------------------------------------------
// Tensor-network contraction

enum class ContractionOrder { greedy, sequential };

struct ContractionOptions {
  int threads = 1;
  std::uint64_t max_elements = kDefaultTensorBudget;
  ContractionOrder order = ContractionOrder::greedy;
};

namespace detail {

/// Dense tensor with every leg of dimension N, legs[0] most significant.
struct Tensor {
  std::vector<int> legs;
  std::vector<cplx> data;
};

inline std::uint64_t tensor_size(int n, std::size_t rank, std::uint64_t budget) {
  return checked_power(n, static_cast<int>(rank), budget, "state_sum intermediate");
}

/// Reorders legs so that out.legs[j] = t.legs[order[j]].
inline Tensor permute(const Tensor& t, const std::vector<int>& order, int n) {
  const std::size_t rank = t.legs.size();
  bool identity = true;
  for (std::size_t j = 0; j < rank; ++j) identity = identity && order[j] == static_cast<int>(j);
  if (identity) return t;

  std::vector<std::uint64_t> stride(rank, 1);
  for (std::size_t j = rank; j-- > 1;) stride[j - 1] = stride[j] * n;
  Tensor out;
  out.legs.resize(rank);
  std::vector<std::uint64_t> src_stride(rank);
  for (std::size_t j = 0; j < rank; ++j) {
    out.legs[j] = t.legs[order[j]];
    src_stride[j] = stride[order[j]];
  }
  out.data.resize(t.data.size());
  // Innermost destination leg as a strided run, outer legs by odometer.
  const std::uint64_t inner = src_stride[rank - 1];
  std::vector<int> digit(rank - 1, 0);
  std::uint64_t src = 0;
  for (std::uint64_t dst = 0; dst < out.data.size(); dst += n) {
    cplx* o = &out.data[dst];
    const cplx* i = &t.data[src];
    for (int x = 0; x < n; ++x) o[x] = i[x * inner];
    for (std::size_t j = rank - 1; j-- > 0;) {
      src += src_stride[j];
      if (++digit[j] < n) break;
      src -= src_stride[j] * n;
      digit[j] = 0;
    }
  }
  return out;
}

/// Fixes leg `pos` to `value`.
inline Tensor slice(const Tensor& t, int pos, int value, int n) {
  std::vector<int> order(t.legs.size());
  std::iota(order.begin(), order.end(), 0);
  std::rotate(order.begin(), order.begin() + pos, order.begin() + pos + 1);
  const Tensor front = permute(t, order, n);
  const std::size_t block = front.data.size() / n;
  Tensor out;
  out.legs.assign(front.legs.begin() + 1, front.legs.end());
  out.data.assign(front.data.begin() + value * block, front.data.begin() + (value + 1) * block);
  return out;
}

/// Traces two legs carrying the same edge.
inline Tensor trace_pair(const Tensor& t, int p, int r, int n) {
  std::vector<int> order{p, r};
  for (int j = 0; j < static_cast<int>(t.legs.size()); ++j)
    if (j != p && j != r) order.push_back(j);
  const Tensor front = permute(t, order, n);
  const std::size_t block = front.data.size() / (n * n);
  Tensor out;
  out.legs.assign(front.legs.begin() + 2, front.legs.end());
  out.data.assign(block, 0.0);
  for (int a = 0; a < n; ++a) {
    const cplx* src = &front.data[(a * n + a) * block];
    for (std::size_t b = 0; b < block; ++b) out.data[b] += src[b];
  }
  return out;
}

inline Tensor normalize_legs(Tensor t, const std::vector<char>& fixed, int n) {
  for (bool changed = true; changed;) {
    changed = false;
    for (int p = 0; p < static_cast<int>(t.legs.size()) && !changed; ++p) {
      if (fixed[t.legs[p]]) {
        t = slice(t, p, 0, n);
        changed = true;
        break;
      }
      for (int r = p + 1; r < static_cast<int>(t.legs.size()); ++r) {
        if (t.legs[p] == t.legs[r]) {
          t = trace_pair(t, p, r, n);
          changed = true;
          break;
        }
      }
    }
  }
  return t;
}

using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
inline bool is_sparse(const std::vector<cplx>& data) {
  if (data.size() < 4096) return false;
  const auto nnz = std::count_if(data.begin(), data.end(), [](cplx x) { return x != 0.0; });
  return static_cast<std::size_t>(nnz) * 4 < data.size();
}

template <typename Fn>
void run_split(Eigen::Index rows, int threads, Fn fn) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(rows)));
  if (threads == 1) {
    fn(Eigen::Index{0}, rows);
    return;
  }
  std::vector<std::thread> pool;
  const Eigen::Index chunk = (rows + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) pool.emplace_back(fn, t * chunk, std::min(rows, (t + 1) * chunk));
  for (std::thread& th : pool) th.join();
}

struct Split {
  std::vector<int> a_free, a_shared, b_free, b_shared;
};

inline Split split_legs(const Tensor& a, const Tensor& b) {
  Split sp;
  for (int i = 0; i < static_cast<int>(a.legs.size()); ++i) {
    const auto it = std::find(b.legs.begin(), b.legs.end(), a.legs[i]);
    if (it == b.legs.end()) {
      sp.a_free.push_back(i);
    } else {
      sp.a_shared.push_back(i);
      sp.b_shared.push_back(static_cast<int>(it - b.legs.begin()));
    }
  }
  for (int j = 0; j < static_cast<int>(b.legs.size()); ++j)
    if (std::find(sp.b_shared.begin(), sp.b_shared.end(), j) == sp.b_shared.end()) sp.b_free.push_back(j);
  return sp;
}

/// Dense a against sparse b, scattering each nonzero of b over a whole row of
/// a^T. Result legs are b's free legs then a's. Each thread owns a slice of
/// a's free index, so the summation order does not depend on the thread count.
inline Tensor contract_sparse_rhs(const Tensor& a, const Tensor& b, const Split& sp, int n,
                                  const ContractionOptions& opt) {
  std::vector<int> at_order = sp.a_shared;
  at_order.insert(at_order.end(), sp.a_free.begin(), sp.a_free.end());
  const Tensor at = permute(a, at_order, n);
  std::int64_t inner = 1, rows = 1;
  for (std::size_t s = 0; s < sp.a_shared.size(); ++s) inner *= n;
  for (std::size_t s = 0; s < sp.a_free.size(); ++s) rows *= n;

  // Weights turning b's digits into (shared index, free index).
  const std::size_t rank = b.legs.size();
  std::vector<std::int64_t> in_w(rank, 0), out_w(rank, 0);
  std::int64_t w = 1;
  for (std::size_t s = sp.b_shared.size(); s-- > 0;) {
    in_w[sp.b_shared[s]] = w;
    w *= n;
  }
  w = 1;
  for (std::size_t s = sp.b_free.size(); s-- > 0;) {
    out_w[sp.b_free[s]] = w;
    w *= n;
  }
  const std::int64_t cols = w;
  struct Entry {
    std::int64_t i, j;
    cplx v;
  };
  std::vector<Entry> entries;
  std::vector<int> digit(rank, 0);
  std::int64_t i = 0, j = 0;
  for (std::size_t src = 0; src < b.data.size(); ++src) {
    if (b.data[src] != 0.0) entries.push_back({i, j, b.data[src]});
    for (std::size_t d = rank; d-- > 0;) {
      i += in_w[d];
      j += out_w[d];
      if (++digit[d] < n) break;
      i -= in_w[d] * n;
      j -= out_w[d] * n;
      digit[d] = 0;
    }
  }

  Tensor out;
  for (int f : sp.b_free) out.legs.push_back(b.legs[f]);
  for (int f : sp.a_free) out.legs.push_back(a.legs[f]);
  out.data.assign(static_cast<std::size_t>(rows * cols), 0.0);
  run_split(rows, opt.threads, [&](Eigen::Index r0, Eigen::Index r1) {
    // Real arithmetic: std::complex multiplication carries NaN recovery code.
    for (const Entry& e : entries) {
      const double vr = e.v.real(), vi = e.v.imag();
      const double* src = reinterpret_cast<const double*>(&at.data[e.i * rows]);
      double* dst = reinterpret_cast<double*>(&out.data[e.j * rows]);
      for (Eigen::Index r = r0; r < r1; ++r) {
        const double sr = src[2 * r], si = src[2 * r + 1];
        dst[2 * r] += vr * sr - vi * si;
        dst[2 * r + 1] += vr * si + vi * sr;
      }
    }
  });
  return out;
}

/// Sums over the shared legs. Dense pairs go through a GEMM with result legs a's
/// free legs then b's; a large sparse operand takes the scatter path instead.
inline Tensor contract(const Tensor& a, const Tensor& b, int n, const ContractionOptions& opt) {
  const Split sp = split_legs(a, b);
  tensor_size(n, sp.a_free.size() + sp.b_free.size(), opt.max_elements);

  if (b.data.size() >= a.data.size() && is_sparse(b.data)) return contract_sparse_rhs(a, b, sp, n, opt);
  if (a.data.size() > b.data.size() && is_sparse(a.data)) {
    return contract_sparse_rhs(b, a, split_legs(b, a), n, opt);
  }

  std::vector<int> a_order = sp.a_free;
  a_order.insert(a_order.end(), sp.a_shared.begin(), sp.a_shared.end());
  std::vector<int> b_order = sp.b_shared;
  b_order.insert(b_order.end(), sp.b_free.begin(), sp.b_free.end());
  const Tensor ap = permute(a, a_order, n);
  const Tensor bp = permute(b, b_order, n);

  Eigen::Index inner = 1;
  for (std::size_t s = 0; s < sp.a_shared.size(); ++s) inner *= n;
  const Eigen::Index rows = static_cast<Eigen::Index>(ap.data.size()) / inner;
  const Eigen::Index cols = static_cast<Eigen::Index>(bp.data.size()) / inner;

  Tensor out;
  for (int i : sp.a_free) out.legs.push_back(a.legs[i]);
  for (int j : sp.b_free) out.legs.push_back(b.legs[j]);
  out.data.assign(static_cast<std::size_t>(rows * cols), 0.0);

  const Eigen::Map<const RowMatrix> bm(bp.data.data(), inner, cols);
  run_split(rows, opt.threads, [&](Eigen::Index r0, Eigen::Index r1) {
    if (r1 <= r0) return;
    const Eigen::Map<const RowMatrix> am(ap.data.data() + r0 * inner, r1 - r0, inner);
    Eigen::Map<RowMatrix> cm(out.data.data() + r0 * cols, r1 - r0, cols);
    cm.noalias() = am * bm;
  });
  return out;
}

/// Fills only the support: k and the north, east, west angles determine n, m, l,
/// and the south angle takes up the remainder of N-1. Legs on fixed edges are
/// sliced at label 0 while filling.
inline Tensor crossing_tensor(const QContext& ctx, const CrossingSite& c, const std::vector<char>& fixed,
                              std::uint64_t budget = kDefaultTensorBudget) {
  const int n = ctx.N();
  int rank = 0;
  for (int e : c.edges) rank += fixed[e] ? 0 : 1;
  tensor_size(n, rank, budget);
  const bool pos = c.sign == Sign::positive;
  std::vector<cplx> inv_q(n), inv_qi(n);
  for (int j = 0; j <= n - 1; ++j) {
    inv_q[j] = 1.0 / ctx.poch_q_table()[j];
    inv_qi[j] = 1.0 / ctx.poch_qinv_table()[j];
  }
  const auto& first = pos ? inv_q : inv_qi;   // south and north
  const auto& second = pos ? inv_qi : inv_q;  // east and west

  Tensor t;
  std::array<std::size_t, 4> stride{};
  std::size_t size = 1;
  for (int j = 4; j-- > 0;) {
    if (fixed[c.edges[j]]) continue;
    stride[j] = size;
    size *= static_cast<std::size_t>(n);
  }
  for (int j = 0; j < 4; ++j)
    if (!fixed[c.edges[j]]) t.legs.push_back(c.edges[j]);
  t.data.assign(size, 0.0);

  auto allowed = [&](int leg, int label) { return !fixed[c.edges[leg]] || label == 0; };
  for (int k = 0; k < n; ++k) {
    if (!allowed(0, k)) continue;
    for (int an = 0; an < n; ++an) {
      const int nl = ctx.residue(k - an);
      if (!allowed(1, nl)) continue;
      for (int ae = 0; an + ae < n; ++ae) {
        const int m = ctx.residue(nl - ae);
        if (!allowed(3, m)) continue;
        const cplx part = static_cast<double>(n) * first[an] * second[ae];
        for (int aw = 0; an + ae + aw < n; ++aw) {
          const int l = ctx.residue(k + aw);
          if (!allowed(2, l)) continue;
          const int as = n - 1 - an - ae - aw;
          const std::int64_t K = k, Nn = nl, L = l, M = m;
          const cplx phase = pos ? ctx.q_pow(1 - (L - Nn + 1) * (M - K))
                                 : ctx.q_pow(-1 + (M - K - 1) * (L - Nn));
          t.data[k * stride[0] + nl * stride[1] + l * stride[2] + m * stride[3]] =
              phase * part * first[as] * second[aw];
        }
      }
    }
  }
  return t;
}

inline Tensor extremum_tensor(const QContext& ctx, const ExtremumSite& e) {
  const int n = ctx.N();
  Tensor t{{e.left_edge, e.right_edge}, std::vector<cplx>(static_cast<std::size_t>(n) * n)};
  for (int left = 0; left < n; ++left)
    for (int right = 0; right < n; ++right)
      t.data[left * n + right] = mu_entry(ctx, right, left, e.sign);
  return t;
}

inline std::size_t shared_count(const Tensor& a, const Tensor& b) {
  std::size_t s = 0;
  for (int e : a.legs) s += std::count(b.legs.begin(), b.legs.end(), e);
  return s;
}

}  // namespace detail

/**
 * Contracts the diagram's labeled-edge network: one rank-4 tensor per crossing,
 * one rank-2 tensor per left-to-right extremum, open ends fixed to label 0.
 * Greedy order picks the pair whose result is smallest (ties by position);
 * sequential order folds tensors in diagram order.
 */
inline cplx state_sum(const QContext& ctx, const TangleDiagram& d,
                      const ContractionOptions& opt = {}) {
  const int n = ctx.N();
  const DiagramGraph g = build_graph(d);
  std::vector<char> fixed(g.edge_count, 0);
  fixed[g.start_edge] = 1;
  fixed[g.end_edge] = 1;

  struct Placed {
    int level;
    detail::Tensor t;
  };
  std::vector<Placed> placed;
  for (const CrossingSite& c : g.crossings) placed.push_back({c.level, detail::crossing_tensor(ctx, c, fixed, opt.max_elements)});
  for (const ExtremumSite& e : g.extrema) placed.push_back({e.level, detail::extremum_tensor(ctx, e)});
  std::stable_sort(placed.begin(), placed.end(),
                   [](const Placed& a, const Placed& b) { return a.level < b.level; });

  std::vector<detail::Tensor> net;
  for (Placed& p : placed) net.push_back(detail::normalize_legs(std::move(p.t), fixed, n));
  if (net.empty()) return 1.0;

  while (net.size() > 1) {
    std::size_t bi = 0, bj = 1;
    if (opt.order == ContractionOrder::greedy) {
      std::size_t best_rank = std::numeric_limits<std::size_t>::max();
      bool best_shares = false;
      for (std::size_t i = 0; i < net.size(); ++i) {
        for (std::size_t j = i + 1; j < net.size(); ++j) {
          const std::size_t s = detail::shared_count(net[i], net[j]);
          const std::size_t rank = net[i].legs.size() + net[j].legs.size() - 2 * s;
          const bool shares = s > 0;
          if ((shares && !best_shares) || (shares == best_shares && rank < best_rank)) {
            best_rank = rank;
            best_shares = shares;
            bi = i;
            bj = j;
          }
        }
      }
    }
    detail::Tensor merged = detail::contract(net[bi], net[bj], n, opt);
    merged = detail::normalize_legs(std::move(merged), fixed, n);
    net.erase(net.begin() + static_cast<std::ptrdiff_t>(bj));
    net[bi] = std::move(merged);
  }
  if (!net.front().legs.empty()) {
    throw DiagramError("state_sum: network did not close; dangling edges remain");
  }
  return net.front().data.front();
}

}  // namespace kashaev
