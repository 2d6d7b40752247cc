// Copyright 2026 The spinshield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Buffer-spin networks as small simple graphs.
//
// Buffer vertices carry the spin labels 2..N+1 (site 1 is the central spin,
// which couples to every buffer vertex and is not part of the graph).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace spinshield {

using BigCount = boost::multiprecision::cpp_int;

// Largest buffer size handled by the exhaustive graph routines.
inline constexpr int kMaxEnumerationBuffer = 6;
inline constexpr int kMaxPlanarityBuffer = 8;

struct Edge {
  int u = 0;  // u < v, both in 2..N+1
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class BufferGraph {
 public:
  BufferGraph() = default;
  explicit BufferGraph(int n_buffer);
  BufferGraph(int n_buffer, std::vector<Edge> edges);

  // Builds from an edge bitmask over the pairs of K_N in lexicographic
  // order (2,3), (2,4), ..., (N, N+1).
  static BufferGraph from_mask(int n_buffer, std::uint64_t mask);

  int n_buffer() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool has_edge(int a, int b) const;
  std::uint64_t mask() const;

  // Adjacency rows over 0-based vertex indices (label - 2).
  std::vector<std::uint32_t> adjacency() const;

  friend bool operator==(const BufferGraph&, const BufferGraph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

// Number of vertex pairs of K_N.
int pair_count(int n_buffer);

// Edge budget of a planar buffer network: 3N - 6 for N >= 3, C(N,2) below.
int max_planar_edges(int n_buffer);

// Index of a pair in the lexicographic edge ordering used by masks.
int pair_index(int n_buffer, int a, int b);

struct GeometryClass {
  int n_buffer = 0;
  int k = 0;
  std::uint64_t index = 0;  // canonical code of the isomorphism class
  friend bool operator==(const GeometryClass&, const GeometryClass&) = default;
};

// Sum over k = 0..cap of C(E, k), with E = N(N-1)/2 and cap = 3N - 6.
// Counts labeled edge subsets within the budget; planarity is not checked.
BigCount geometry_count(int n_buffer);

// Kuratowski test: true iff the graph has no K5 or K3,3 minor.
bool is_planar(const BufferGraph& g);

// Simple, planar and within the edge budget.
bool is_admissible(const BufferGraph& g);

// All edge subsets within the budget, optionally filtered by planarity and
// reduced to one canonical representative per isomorphism class. Results
// are sorted by (edge count, mask).
std::vector<BufferGraph> enumerate_buffer_graphs(int n_buffer, bool planar_filter,
                                                 bool up_to_isomorphism);

// Minimum relabeled edge mask over all vertex permutations.
std::uint64_t canonical_code(const BufferGraph& g);
BufferGraph canonical_form(const BufferGraph& g);
GeometryClass classify(const BufferGraph& g);
bool isomorphic(const BufferGraph& a, const BufferGraph& b);

enum class Extreme { empty, maximal };

// Empty network or the maximal planar network with 3N - 6 edges
// (triangle, K4, K5 minus an edge, K6 minus a three-edge path).
BufferGraph extreme_geometry(int n_buffer, Extreme which);

std::string to_string(Extreme e);
Extreme parse_extreme(std::string_view s);

// "N=<n>; edges=(i,j),(k,l),..." with vertex labels 2..N+1.
std::string to_edge_list(const BufferGraph& g);
BufferGraph parse_edge_list(std::string_view text);

}  // namespace spinshield
