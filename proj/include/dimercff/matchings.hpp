#pragma once

// Exact perfect-matching machinery: full enumeration (the ground-truth
// oracle for moment identities), an independent transfer-style counting
// oracle for planar instances too large to enumerate, and uniform sampling.

#include <cstdint>
#include <functional>
#include <vector>

#include "dimercff/lattice_graph.hpp"

namespace dimercff {

// One dimer configuration, as sorted edge indices into DimerGraph::edges().
struct Matching {
  std::vector<int> edge_ids;
  bool contains(int edge_id) const;
};

inline constexpr std::uint64_t kDefaultEnumerationLimit = 10'000'000;

// Visits every perfect matching exactly once, branching on the uncovered
// vertex with fewest remaining partners (ties by lowest index). Throws
// EnumerationLimitError once more than `limit` matchings were produced.
// Returns the total count.
std::uint64_t for_each_matching(const DimerGraph& g,
                                const std::function<void(const Matching&)>& visit,
                                std::uint64_t limit = kDefaultEnumerationLimit);

// Collects all matchings (instances small enough to hold in memory).
std::vector<Matching> enumerate_matchings(const DimerGraph& g,
                                          std::uint64_t limit = kDefaultEnumerationLimit);

// Broken-profile counting oracle for planar instances (rectangles, holed and
// punctured domains). Independent of both enumeration and determinants.
std::uint64_t count_matchings(const DimerGraph& g);

// Number of perfect matchings containing every edge of `forced`
// (vertex-disjoint edges, each present in the graph).
std::uint64_t count_matchings_containing(const DimerGraph& g, const std::vector<Edge>& forced);

// Exact centered moment (1/Z) sum_M prod_j s_j (1[e_j in M] - p_j), with p_j
// the enumeration frequency of the edge crossed by dual edge j. Requires the
// crossed primal edges to be pairwise vertex-disjoint.
double empirical_moment(const DimerGraph& g, const std::vector<DualEdge>& dual_edges,
                        const std::vector<Matching>& all_matchings);

// Same centered moment evaluated from the counting oracle via inclusion-
// exclusion over forced edge subsets; usable when enumeration is infeasible.
double moment_from_counts(const DimerGraph& g, const std::vector<DualEdge>& dual_edges);

// n i.i.d. uniform matchings drawn by index into the enumerated list.
// Reproducible across platforms for a fixed seed.
std::vector<Matching> sample_uniform(const DimerGraph& g, std::uint64_t rng_seed, int n,
                                     std::uint64_t limit = kDefaultEnumerationLimit);

}  // namespace dimercff
