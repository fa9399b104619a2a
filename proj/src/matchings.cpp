#include "dimercff/matchings.hpp"

#include <algorithm>
#include <random>

namespace dimercff {

bool Matching::contains(int edge_id) const {
  return std::binary_search(edge_ids.begin(), edge_ids.end(), edge_id);
}

namespace {

struct Enumerator {
  const DimerGraph& g;
  const std::function<void(const Matching&)>& visit;
  std::uint64_t limit;
  std::uint64_t count = 0;
  std::vector<char> covered;
  std::vector<int> chosen;

  Enumerator(const DimerGraph& graph, const std::function<void(const Matching&)>& v,
             std::uint64_t lim)
      : g(graph), visit(v), limit(lim), covered(graph.vertex_count(), 0) {}

  void emit() {
    if (++count > limit)
      throw EnumerationLimitError("enumeration limit exceeded", count - 1);
    Matching m;
    m.edge_ids = chosen;
    std::sort(m.edge_ids.begin(), m.edge_ids.end());
    visit(m);
  }

  void recurse(int uncovered_left) {
    if (uncovered_left == 0) {
      emit();
      return;
    }
    // Fail-first: the uncovered vertex with fewest uncovered partners.
    int best = -1, best_deg = 5;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (covered[v]) continue;
      int deg = 0;
      for (int w : g.neighbors(v))
        if (!covered[w]) ++deg;
      if (deg < best_deg) {
        best = v;
        best_deg = deg;
        if (deg == 0) break;
      }
    }
    if (best_deg == 0) return;  // isolated uncovered vertex: dead branch
    covered[best] = 1;
    const auto& nb = g.neighbors(best);
    for (size_t j = 0; j < nb.size(); ++j) {
      int w = nb[j];
      if (covered[w]) continue;
      covered[w] = 1;
      chosen.push_back(g.edge_between(best, w));
      recurse(uncovered_left - 2);
      chosen.pop_back();
      covered[w] = 0;
    }
    covered[best] = 0;
  }
};

}  // namespace

std::uint64_t for_each_matching(const DimerGraph& g,
                                const std::function<void(const Matching&)>& visit,
                                std::uint64_t limit) {
  if (!g.balanced())
    throw UnmatchableGraphError("enumerate: color counts differ (" +
                                std::to_string(g.black_count()) + " black, " +
                                std::to_string(g.white_count()) + " white)");
  Enumerator e(g, visit, limit);
  e.recurse(g.vertex_count());
  return e.count;
}

std::vector<Matching> enumerate_matchings(const DimerGraph& g, std::uint64_t limit) {
  std::vector<Matching> out;
  for_each_matching(g, [&](const Matching& m) { out.push_back(m); }, limit);
  return out;
}

namespace {

// Broken-profile transfer count over the vertex grid. Bit x of the profile:
// while scanning cell (x, y), whether that cell is already covered by a
// vertical domino from below (bits < x already refer to row y+1).
std::uint64_t profile_count(const DimerGraph& g, const std::vector<char>& present) {
  const int W = g.width_period();
  const int H = g.rows();
  if (W > 24) throw ConstructionError("count_matchings: width too large for profile count");
  const std::size_t n_masks = std::size_t{1} << W;
  std::vector<unsigned __int128> cur(n_masks, 0), nxt;
  cur[0] = 1;
  auto at = [&](int x, int y) { return present[static_cast<std::size_t>(y) * W + x] != 0; };
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      nxt.assign(n_masks, 0);
      const std::uint32_t bit = 1u << x;
      for (std::size_t m = 0; m < n_masks; ++m) {
        const unsigned __int128 ways = cur[m];
        if (ways == 0) continue;
        const bool covered = (m & bit) != 0;
        if (!at(x, y)) {
          if (!covered) nxt[m] += ways;
          continue;
        }
        if (covered) {
          nxt[m & ~bit] += ways;
          continue;
        }
        // Vertical domino to (x, y+1).
        if (y + 1 < H && at(x, y + 1)) nxt[m | bit] += ways;
        // Horizontal domino to (x+1, y).
        if (x + 1 < W && at(x + 1, y) && !(m & (bit << 1)))
          nxt[(m & ~bit) | (bit << 1)] += ways;
      }
      cur.swap(nxt);
    }
  }
  const unsigned __int128 total = cur[0];
  if (total > static_cast<unsigned __int128>(UINT64_MAX))
    throw ConstructionError("count_matchings: count exceeds 64 bits");
  return static_cast<std::uint64_t>(total);
}

std::vector<char> presence_grid(const DimerGraph& g) {
  std::vector<char> present(static_cast<std::size_t>(g.width_period()) * g.rows(), 0);
  for (const VertexId& v : g.vertices())
    present[static_cast<std::size_t>(v.y - g.y_min()) * g.width_period() + v.x] = 1;
  return present;
}

}  // namespace

std::uint64_t count_matchings(const DimerGraph& g) {
  if (g.topology() == Topology::Cylinder)
    throw ConstructionError("count_matchings: profile count covers planar graphs only");
  if (!g.balanced()) return 0;
  return profile_count(g, presence_grid(g));
}

std::uint64_t count_matchings_containing(const DimerGraph& g, const std::vector<Edge>& forced) {
  if (g.topology() == Topology::Cylinder)
    throw ConstructionError("count_matchings_containing: planar graphs only");
  auto present = presence_grid(g);
  for (const Edge& e : forced) {
    if (g.edge_index(e) < 0) throw ConstructionError("count_matchings_containing: edge absent");
    for (const VertexId v : {e.white, e.black}) {
      auto& cell = present[static_cast<std::size_t>(v.y - g.y_min()) * g.width_period() + v.x];
      if (!cell) throw ConstructionError("count_matchings_containing: edges not disjoint");
      cell = 0;
    }
  }
  return profile_count(g, present);
}

namespace {

void require_disjoint(const std::vector<DualEdge>& dual_edges) {
  for (size_t i = 0; i < dual_edges.size(); ++i)
    for (size_t j = i + 1; j < dual_edges.size(); ++j) {
      const Edge &a = dual_edges[i].crossed, &b = dual_edges[j].crossed;
      if (a.white == b.white || a.black == b.black)
        throw ConstructionError("moment: crossed primal edges must be vertex-disjoint");
    }
}

}  // namespace

double empirical_moment(const DimerGraph& g, const std::vector<DualEdge>& dual_edges,
                        const std::vector<Matching>& all_matchings) {
  require_disjoint(dual_edges);
  if (all_matchings.empty()) throw UnmatchableGraphError("empirical_moment: no matchings");
  const int m = static_cast<int>(dual_edges.size());
  std::vector<int> ids(m);
  std::vector<long double> freq(m, 0.0L);
  for (int j = 0; j < m; ++j) {
    ids[j] = g.edge_index(dual_edges[j].crossed);
    if (ids[j] < 0) throw ConstructionError("empirical_moment: crossed edge not in graph");
  }
  for (const Matching& M : all_matchings)
    for (int j = 0; j < m; ++j)
      if (M.contains(ids[j])) freq[j] += 1.0L;
  const long double Z = static_cast<long double>(all_matchings.size());
  for (int j = 0; j < m; ++j) freq[j] /= Z;
  long double acc = 0.0L;
  for (const Matching& M : all_matchings) {
    long double term = 1.0L;
    for (int j = 0; j < m; ++j)
      term *= dual_edges[j].sign * ((M.contains(ids[j]) ? 1.0L : 0.0L) - freq[j]);
    acc += term;
  }
  return static_cast<double>(acc / Z);
}

double moment_from_counts(const DimerGraph& g, const std::vector<DualEdge>& dual_edges) {
  require_disjoint(dual_edges);
  const int m = static_cast<int>(dual_edges.size());
  const std::uint64_t z = count_matchings(g);
  if (z == 0) throw UnmatchableGraphError("moment_from_counts: no matchings");
  // P(S) for every subset S of forced edges.
  std::vector<long double> p_subset(std::size_t{1} << m);
  for (std::uint32_t s = 0; s < (1u << m); ++s) {
    std::vector<Edge> forced;
    for (int j = 0; j < m; ++j)
      if (s & (1u << j)) forced.push_back(dual_edges[j].crossed);
    p_subset[s] =
        static_cast<long double>(count_matchings_containing(g, forced)) / static_cast<long double>(z);
  }
  // E prod (x_j - p_j) = sum_S prod_{j not in S} (-p_j) * P(S).
  long double acc = 0.0L;
  for (std::uint32_t s = 0; s < (1u << m); ++s) {
    long double term = p_subset[s];
    for (int j = 0; j < m; ++j)
      if (!(s & (1u << j))) term *= -p_subset[1u << j];
    acc += term;
  }
  for (int j = 0; j < m; ++j) acc *= dual_edges[j].sign;
  return static_cast<double>(acc);
}

std::vector<Matching> sample_uniform(const DimerGraph& g, std::uint64_t rng_seed, int n,
                                     std::uint64_t limit) {
  if (n < 0) throw ConstructionError("sample_uniform: n must be nonnegative");
  std::vector<Matching> out;
  if (n == 0) return out;
  const std::vector<Matching> all = enumerate_matchings(g, limit);
  if (all.empty()) throw UnmatchableGraphError("sample_uniform: no matchings");
  std::mt19937_64 rng(rng_seed);
  const std::uint64_t z = all.size();
  const std::uint64_t reject_from = UINT64_MAX - UINT64_MAX % z;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= reject_from);
    out.push_back(all[r % z]);
  }
  return out;
}

}  // namespace dimercff
