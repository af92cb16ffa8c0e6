/**
 * @file diagram.hpp
 * @brief (1,1)-tangle diagrams in Morse position and their labeled-edge graph.
 *
 * A diagram is a word of events read top to bottom. Strand positions are
 * 0-based at the current level.
 *
 *   xp / xn   crossing of strands (at, at+1), both running downward; xp carries
 *             R, xn carries R^{-1}.
 *   cap_lr    ∩ opening a new pair at positions (at, at+1), width +2. The strand
 *             climbs the left leg and descends the right one; carries μ^{-1}.
 *   cap_rl    ∩ traversed right to left; identity pairing.
 *   cup_lr    ∪ closing strands (at, at+1), width -2. The strand descends the
 *             left leg and climbs the right one; carries μ.
 *   cup_rl    ∪ traversed right to left; identity pairing.
 *
 * Edges are the pieces of the string between crossings and left-to-right
 * extrema; right-to-left extrema do not cut the string.
 */

#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kashaev/errors.hpp"
#include "kashaev/yang_baxter.hpp"

namespace kashaev {

enum class EventKind { pos_cross, neg_cross, cup_lr, cup_rl, cap_lr, cap_rl };

struct Event {
  EventKind kind;
  int at;

  bool operator==(const Event&) const = default;
};

inline std::string_view op_code(EventKind kind) {
  switch (kind) {
    case EventKind::pos_cross: return "xp";
    case EventKind::neg_cross: return "xn";
    case EventKind::cup_lr: return "cup_lr";
    case EventKind::cup_rl: return "cup_rl";
    case EventKind::cap_lr: return "cap_lr";
    case EventKind::cap_rl: return "cap_rl";
  }
  return "?";
}

inline std::optional<EventKind> parse_op_code(std::string_view code) {
  for (EventKind k : {EventKind::pos_cross, EventKind::neg_cross, EventKind::cup_lr,
                      EventKind::cup_rl, EventKind::cap_lr, EventKind::cap_rl}) {
    if (op_code(k) == code) return k;
  }
  return std::nullopt;
}

inline bool is_crossing(EventKind k) {
  return k == EventKind::pos_cross || k == EventKind::neg_cross;
}
inline bool is_cap(EventKind k) { return k == EventKind::cap_lr || k == EventKind::cap_rl; }
inline bool is_cup(EventKind k) { return k == EventKind::cup_lr || k == EventKind::cup_rl; }

namespace detail {

class UnionFind {
 public:
  int add() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

class TangleDiagram {
 public:
  TangleDiagram(std::string name, std::vector<Event> events)
      : name_(std::move(name)), events_(std::move(events)) {
    validate();
  }

  const std::string& name() const { return name_; }
  const std::vector<Event>& events() const { return events_; }
  /// widths()[t] is the number of strands below event t-1; widths().front() == 1.
  const std::vector<int>& widths() const { return widths_; }

  int max_width() const { return *std::max_element(widths_.begin(), widths_.end()); }

  int crossing_count() const {
    return static_cast<int>(std::count_if(events_.begin(), events_.end(),
                                          [](const Event& e) { return is_crossing(e.kind); }));
  }

  int writhe() const {
    int w = 0;
    for (const Event& e : events_) {
      if (e.kind == EventKind::pos_cross) ++w;
      if (e.kind == EventKind::neg_cross) --w;
    }
    return w;
  }

 private:
  struct Strand {
    bool down;
    int component;
  };

  [[noreturn]] void fail(std::size_t t, const std::string& msg) const {
    throw DiagramError("diagram '" + name_ + "', event " + std::to_string(t) + ": " + msg);
  }

  void validate() {
    detail::UnionFind comps;
    std::vector<Strand> strands{{true, comps.add()}};
    widths_.assign(1, 1);
    for (std::size_t t = 0; t < events_.size(); ++t) {
      const Event& ev = events_[t];
      const int w = static_cast<int>(strands.size());
      if (is_crossing(ev.kind)) {
        if (ev.at < 0 || ev.at + 1 >= w) fail(t, "crossing position out of range");
        if (!strands[ev.at].down || !strands[ev.at + 1].down) {
          fail(t, "both strands at a crossing must run downward");
        }
        std::swap(strands[ev.at], strands[ev.at + 1]);
      } else if (is_cap(ev.kind)) {
        if (ev.at < 0 || ev.at > w) fail(t, "cap position out of range");
        const int c = comps.add();
        const bool left_down = ev.kind == EventKind::cap_rl;
        strands.insert(strands.begin() + ev.at, {Strand{left_down, c}, Strand{!left_down, c}});
      } else {
        if (ev.at < 0 || ev.at + 1 >= w) fail(t, "cup position out of range");
        const Strand& a = strands[ev.at];
        const Strand& b = strands[ev.at + 1];
        const bool want_left_down = ev.kind == EventKind::cup_lr;
        if (a.down != want_left_down || b.down == want_left_down) {
          fail(t, std::string(op_code(ev.kind)) + " does not match strand orientations");
        }
        if (comps.find(a.component) == comps.find(b.component)) {
          fail(t, "cup closes a separate component; only knots are supported");
        }
        comps.unite(a.component, b.component);
        strands.erase(strands.begin() + ev.at, strands.begin() + ev.at + 2);
      }
      if (strands.empty()) fail(t, "width dropped to zero");
      widths_.push_back(static_cast<int>(strands.size()));
    }
    if (strands.size() != 1) {
      throw DiagramError("diagram '" + name_ + "': final width is " +
                         std::to_string(strands.size()) + ", expected 1");
    }
  }

  std::string name_;
  std::vector<Event> events_;
  std::vector<int> widths_;
};

/// Figure-eight knot: the braid σ2^{-1} σ1 σ2^{-1} σ1 on the middle three of five
/// strands, one strand closed on the left through an LR cap, one on the right
/// through an LR cup. Nonzero labelings are parametrized by (j, k, i) with
/// weights (R^{-1})^{0,0}_{0,i} (R^{-1})^{j,i}_{0,1} R^{k,0}_{N-1,0} R^{0,0}_{k,j} (μ^{-1})^0_{N-1} μ^0_1.
inline TangleDiagram figure_eight_diagram() {
  using K = EventKind;
  return TangleDiagram("figure-eight", {{K::cap_lr, 0},
                                        {K::cap_rl, 3},
                                        {K::neg_cross, 2},
                                        {K::pos_cross, 1},
                                        {K::neg_cross, 2},
                                        {K::pos_cross, 1},
                                        {K::cup_lr, 3},
                                        {K::cup_rl, 0}});
}

/// Trefoil as the partial closure of σ1^3.
inline TangleDiagram trefoil_diagram() {
  using K = EventKind;
  return TangleDiagram("trefoil", {{K::cap_rl, 1},
                                   {K::pos_cross, 0},
                                   {K::pos_cross, 0},
                                   {K::pos_cross, 0},
                                   {K::cup_lr, 1}});
}

/// One-crossing unknot (Reidemeister I kink).
inline TangleDiagram kink_diagram() {
  using K = EventKind;
  return TangleDiagram("kink", {{K::cap_rl, 1}, {K::pos_cross, 0}, {K::cup_lr, 1}});
}

/// Crossingless unknot: a single zigzag, one cap and one cup.
inline TangleDiagram unknot_diagram() {
  using K = EventKind;
  return TangleDiagram("unknot", {{K::cap_lr, 1}, {K::cup_lr, 0}});
}

inline std::optional<TangleDiagram> builtin_diagram(std::string_view name) {
  if (name == "figure-eight" || name == "4_1") return figure_eight_diagram();
  if (name == "trefoil" || name == "3_1") return trefoil_diagram();
  if (name == "kink") return kink_diagram();
  if (name == "unknot") return unknot_diagram();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Labeled-edge graph and planar regions

enum class Corner : int { north = 0, east = 1, south = 2, west = 3 };

struct CrossingSite {
  Sign sign;
  int level;
  std::array<int, 4> edges;    // k (top-left), n (top-right), l (bottom-left), m (bottom-right)
  std::array<int, 4> regions;  // indexed by Corner
};

/// μ (positive, LR cup) or μ^{-1} (negative, LR cap).
struct ExtremumSite {
  Sign sign;
  int level;
  int left_edge;
  int right_edge;
};

struct DiagramGraph {
  int edge_count = 0;
  int start_edge = 0;
  int end_edge = 0;
  std::vector<CrossingSite> crossings;
  std::vector<ExtremumSite> extrema;
  int region_count = 0;
  int left_region = 0;
  int right_region = 1;

  bool unbounded(int region) const { return region == left_region || region == right_region; }
};

inline DiagramGraph build_graph(const TangleDiagram& d) {
  detail::UnionFind edges;
  detail::UnionFind regions;
  const int start = edges.add();
  const int left = regions.add();
  const int right = regions.add();

  std::vector<int> strand_edge{start};
  std::vector<int> gaps{left, right};  // gaps[g] lies left of strand g

  struct RawCrossing {
    Sign sign;
    int level;
    std::array<int, 4> edges;
    std::array<int, 4> regions;
  };
  std::vector<RawCrossing> raw_crossings;
  std::vector<ExtremumSite> raw_extrema;

  for (std::size_t t = 0; t < d.events().size(); ++t) {
    const Event& ev = d.events()[t];
    const int i = ev.at;
    const int level = static_cast<int>(t);
    if (is_crossing(ev.kind)) {
      const int l = edges.add();
      const int m = edges.add();
      const int south = regions.add();
      raw_crossings.push_back(
          {ev.kind == EventKind::pos_cross ? Sign::positive : Sign::negative,
           level,
           {strand_edge[i], strand_edge[i + 1], l, m},
           {gaps[i + 1], gaps[i + 2], south, gaps[i]}});
      strand_edge[i] = l;
      strand_edge[i + 1] = m;
      gaps[i + 1] = south;
    } else if (is_cap(ev.kind)) {
      const int outer = gaps[i];
      const int inner = regions.add();
      if (ev.kind == EventKind::cap_lr) {
        const int up = edges.add();
        const int down = edges.add();
        raw_extrema.push_back({Sign::negative, level, up, down});
        strand_edge.insert(strand_edge.begin() + i, {up, down});
      } else {
        const int e = edges.add();
        strand_edge.insert(strand_edge.begin() + i, {e, e});
      }
      gaps[i] = outer;
      gaps.insert(gaps.begin() + i + 1, {inner, outer});
    } else {
      const int a = strand_edge[i];
      const int b = strand_edge[i + 1];
      if (ev.kind == EventKind::cup_lr) {
        raw_extrema.push_back({Sign::positive, level, a, b});
      } else {
        edges.unite(a, b);
      }
      strand_edge.erase(strand_edge.begin() + i, strand_edge.begin() + i + 2);
      regions.unite(gaps[i + 2], gaps[i]);
      gaps.erase(gaps.begin() + i + 1, gaps.begin() + i + 3);
    }
    // The far left and far right of every level reach infinity without crossing a strand.
    regions.unite(gaps.front(), left);
    regions.unite(gaps.back(), right);
  }

  // Compact edge ids in order of first appearance.
  std::vector<int> edge_id(edges.size(), -1);
  int next_edge = 0;
  auto edge_of = [&](int raw) {
    const int root = edges.find(raw);
    if (edge_id[root] < 0) edge_id[root] = next_edge++;
    return edge_id[root];
  };
  DiagramGraph g;
  g.start_edge = edge_of(start);

  std::vector<int> region_id(regions.size(), -1);
  int next_region = 0;
  auto region_of = [&](int raw) {
    const int root = regions.find(raw);
    if (region_id[root] < 0) region_id[root] = next_region++;
    return region_id[root];
  };
  g.left_region = region_of(left);
  g.right_region = region_of(right);
  if (g.left_region == g.right_region) {
    throw DiagramError("diagram '" + d.name() + "': unbounded regions are not separated");
  }

  for (const RawCrossing& rc : raw_crossings) {
    CrossingSite site{rc.sign, rc.level, {}, {}};
    for (int s = 0; s < 4; ++s) site.edges[s] = edge_of(rc.edges[s]);
    for (int s = 0; s < 4; ++s) site.regions[s] = region_of(rc.regions[s]);
    g.crossings.push_back(site);
  }
  for (const ExtremumSite& ex : raw_extrema) {
    g.extrema.push_back({ex.sign, ex.level, edge_of(ex.left_edge), edge_of(ex.right_edge)});
  }
  g.end_edge = edge_of(strand_edge.front());
  g.edge_count = next_edge;
  g.region_count = next_region;
  return g;
}

struct AngleSlot {
  int crossing;
  Corner corner;

  bool operator==(const AngleSlot&) const = default;
};

struct Region {
  std::vector<AngleSlot> slots;
  bool bounded;
};

struct RegionData {
  std::vector<Region> regions;
  int left_unbounded = 0;
  int right_unbounded = 1;

  int bounded_count() const {
    return static_cast<int>(std::count_if(regions.begin(), regions.end(),
                                          [](const Region& r) { return r.bounded; }));
  }
};

/// Faces of the diagram's planar projection, with the crossing corners each contains.
inline RegionData derive_regions(const DiagramGraph& g) {
  RegionData out;
  out.regions.resize(g.region_count);
  for (int r = 0; r < g.region_count; ++r) out.regions[r].bounded = !g.unbounded(r);
  for (int c = 0; c < static_cast<int>(g.crossings.size()); ++c) {
    for (int s = 0; s < 4; ++s) {
      out.regions[g.crossings[c].regions[s]].slots.push_back({c, static_cast<Corner>(s)});
    }
  }
  out.left_unbounded = g.left_region;
  out.right_unbounded = g.right_region;
  return out;
}

inline RegionData derive_regions(const TangleDiagram& d) { return derive_regions(build_graph(d)); }

}  // namespace kashaev
