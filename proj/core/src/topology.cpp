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

#include "spinshield/topology.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <numeric>
#include <mutex>
#include <set>
#include <sstream>

#include "spinshield/error.hpp"

namespace spinshield {

namespace {

constexpr int kMaxGraphBuffer = 11;  // C(11,2) = 55 edge bits

void check_buffer_size(int n_buffer) {
  if (n_buffer < 0 || n_buffer > kMaxGraphBuffer) {
    throw std::invalid_argument("buffer size out of range: " + std::to_string(n_buffer));
  }
}

// ---- Kuratowski minor search over small adjacency bitsets ----------------

using Adjacency = std::vector<std::uint32_t>;

int count_edges(const Adjacency& adj) {
  int twice = 0;
  for (auto row : adj) twice += std::popcount(row);
  return twice / 2;
}

bool contains_k5(const Adjacency& adj) {
  const int m = static_cast<int>(adj.size());
  if (m < 5) return false;
  for (std::uint32_t subset = 0; subset < (1U << m); ++subset) {
    if (std::popcount(subset) != 5) continue;
    bool complete = true;
    for (int v = 0; v < m && complete; ++v) {
      if (!((subset >> v) & 1U)) continue;
      complete = (adj[v] & subset) == (subset & ~(1U << v));
    }
    if (complete) return true;
  }
  return false;
}

bool contains_k33(const Adjacency& adj) {
  const int m = static_cast<int>(adj.size());
  if (m < 6) return false;
  for (std::uint32_t subset = 0; subset < (1U << m); ++subset) {
    if (std::popcount(subset) != 6) continue;
    std::array<int, 6> vs{};
    int c = 0;
    for (int v = 0; v < m; ++v) {
      if ((subset >> v) & 1U) vs[c++] = v;
    }
    // vs[0] is always on side A; choose its two partners.
    for (int i = 1; i < 6; ++i) {
      for (int j = i + 1; j < 6; ++j) {
        std::uint32_t side_a = (1U << vs[0]) | (1U << vs[i]) | (1U << vs[j]);
        std::uint32_t side_b = subset & ~side_a;
        bool ok = true;
        for (int k = 0; k < 6 && ok; ++k) {
          const int v = vs[k];
          const std::uint32_t other = ((side_a >> v) & 1U) ? side_b : side_a;
          ok = (adj[v] & other) == other;
        }
        if (ok) return true;
      }
    }
  }
  return false;
}

Adjacency contract(const Adjacency& adj, int keep, int drop) {
  const int m = static_cast<int>(adj.size());
  Adjacency merged = adj;
  merged[keep] |= merged[drop];
  for (int v = 0; v < m; ++v) {
    if ((merged[v] >> drop) & 1U) merged[v] |= 1U << keep;
  }
  Adjacency out;
  out.reserve(m - 1);
  for (int v = 0; v < m; ++v) {
    if (v == drop) continue;
    std::uint32_t row = merged[v] & ~(1U << drop);
    // Squeeze out bit `drop`.
    const std::uint32_t low = row & ((1U << drop) - 1U);
    const std::uint32_t high = (row >> (drop + 1)) << drop;
    row = low | high;
    out.push_back(row);
  }
  const int new_keep = keep < drop ? keep : keep - 1;
  out[new_keep] &= ~(1U << new_keep);
  return out;
}

bool has_kuratowski_minor(const Adjacency& adj) {
  const int m = static_cast<int>(adj.size());
  if (m < 5) return false;
  const int e = count_edges(adj);
  // K3,3 needs 9 edges and K5 needs 10; contraction never adds edges.
  if (e < 9) return false;
  if (e > 3 * m - 6) return true;
  if (contains_k5(adj) || contains_k33(adj)) return true;
  for (int u = 0; u < m; ++u) {
    for (int v = u + 1; v < m; ++v) {
      if (!((adj[u] >> v) & 1U)) continue;
      if (has_kuratowski_minor(contract(adj, u, v))) return true;
    }
  }
  return false;
}

// ---- canonical labeling ----------------------------------------------------

struct PermutationTable {
  int n = 0;
  std::vector<std::vector<std::uint8_t>> edge_maps;  // perm -> old edge -> new edge
};

const PermutationTable& permutation_table(int n) {
  static std::array<PermutationTable, kMaxPlanarityBuffer + 1> tables;
  static std::array<bool, kMaxPlanarityBuffer + 1> built{};
  static std::mutex guard;
  std::lock_guard lock(guard);
  if (!built[n]) {
    PermutationTable t;
    t.n = n;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    const int pairs = pair_count(n);
    do {
      std::vector<std::uint8_t> map(pairs);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          map[pair_index(n, i + 2, j + 2)] =
              static_cast<std::uint8_t>(pair_index(n, perm[i] + 2, perm[j] + 2));
        }
      }
      t.edge_maps.push_back(std::move(map));
    } while (std::next_permutation(perm.begin(), perm.end()));
    tables[n] = std::move(t);
    built[n] = true;
  }
  return tables[n];
}

std::uint64_t canonical_code_of_mask(int n, std::uint64_t mask) {
  const PermutationTable& table = permutation_table(n);
  std::uint64_t best = mask;
  for (const auto& map : table.edge_maps) {
    std::uint64_t relabeled = 0;
    for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
      relabeled |= std::uint64_t{1} << map[std::countr_zero(bits)];
    }
    best = std::min(best, relabeled);
  }
  return best;
}

}  // namespace

int pair_count(int n_buffer) { return n_buffer * (n_buffer - 1) / 2; }

int max_planar_edges(int n_buffer) {
  return n_buffer >= 3 ? 3 * n_buffer - 6 : pair_count(n_buffer);
}

int pair_index(int n_buffer, int a, int b) {
  if (a > b) std::swap(a, b);
  const int i = a - 2;
  const int j = b - 2;
  if (i < 0 || j >= n_buffer || i == j) {
    throw std::invalid_argument("pair_index: invalid vertex pair");
  }
  return i * n_buffer - i * (i + 1) / 2 + (j - i - 1);
}

BufferGraph::BufferGraph(int n_buffer) : n_(n_buffer) { check_buffer_size(n_buffer); }

BufferGraph::BufferGraph(int n_buffer, std::vector<Edge> edges) : n_(n_buffer) {
  check_buffer_size(n_buffer);
  for (auto& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v) {
      throw ValidationError("self-loop on buffer vertex " + std::to_string(e.u));
    }
    if (e.u < 2 || e.v > n_buffer + 1) {
      throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") outside buffer labels 2.." + std::to_string(n_buffer + 1));
    }
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw ValidationError("duplicate edge in buffer graph");
  }
  edges_ = std::move(edges);
}

BufferGraph BufferGraph::from_mask(int n_buffer, std::uint64_t mask) {
  check_buffer_size(n_buffer);
  std::vector<Edge> edges;
  int index = 0;
  for (int a = 2; a <= n_buffer + 1; ++a) {
    for (int b = a + 1; b <= n_buffer + 1; ++b, ++index) {
      if ((mask >> index) & 1U) edges.push_back({a, b});
    }
  }
  if (index < 64 && (mask >> index) != 0) {
    throw std::invalid_argument("from_mask: bits beyond the pair count");
  }
  return BufferGraph(n_buffer, std::move(edges));
}

bool BufferGraph::has_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

std::uint64_t BufferGraph::mask() const {
  std::uint64_t m = 0;
  for (const auto& e : edges_) m |= std::uint64_t{1} << pair_index(n_, e.u, e.v);
  return m;
}

std::vector<std::uint32_t> BufferGraph::adjacency() const {
  std::vector<std::uint32_t> adj(n_, 0);
  for (const auto& e : edges_) {
    adj[e.u - 2] |= 1U << (e.v - 2);
    adj[e.v - 2] |= 1U << (e.u - 2);
  }
  return adj;
}

BigCount geometry_count(int n_buffer) {
  if (n_buffer < 1) throw std::invalid_argument("geometry_count: N must be >= 1");
  const int pairs = pair_count(n_buffer);
  const int cap = std::min(max_planar_edges(n_buffer), pairs);
  BigCount total = 0;
  BigCount binom = 1;  // C(pairs, k)
  for (int k = 0; k <= cap; ++k) {
    total += binom;
    binom = binom * (pairs - k) / (k + 1);
  }
  return total;
}

bool is_planar(const BufferGraph& g) {
  if (g.n_buffer() > kMaxPlanarityBuffer) {
    throw std::invalid_argument("is_planar: exhaustive Kuratowski search supports N <= " +
                                std::to_string(kMaxPlanarityBuffer));
  }
  return !has_kuratowski_minor(g.adjacency());
}

bool is_admissible(const BufferGraph& g) {
  return static_cast<int>(g.edge_count()) <= max_planar_edges(g.n_buffer()) && is_planar(g);
}

std::uint64_t canonical_code(const BufferGraph& g) {
  if (g.n_buffer() > kMaxPlanarityBuffer) {
    throw std::invalid_argument("canonical_code: N too large for permutation search");
  }
  if (g.n_buffer() < 2) return 0;
  return canonical_code_of_mask(g.n_buffer(), g.mask());
}

BufferGraph canonical_form(const BufferGraph& g) {
  return BufferGraph::from_mask(g.n_buffer(), canonical_code(g));
}

GeometryClass classify(const BufferGraph& g) {
  return {g.n_buffer(), static_cast<int>(g.edge_count()), canonical_code(g)};
}

bool isomorphic(const BufferGraph& a, const BufferGraph& b) {
  return a.n_buffer() == b.n_buffer() && a.edge_count() == b.edge_count() &&
         canonical_code(a) == canonical_code(b);
}

std::vector<BufferGraph> enumerate_buffer_graphs(int n_buffer, bool planar_filter,
                                                 bool up_to_isomorphism) {
  if (n_buffer < 1 || n_buffer > kMaxEnumerationBuffer) {
    throw std::invalid_argument("enumerate_buffer_graphs: N must be in 1.." +
                                std::to_string(kMaxEnumerationBuffer));
  }
  const int pairs = pair_count(n_buffer);
  const int cap = max_planar_edges(n_buffer);
  std::vector<std::uint64_t> masks;
  std::set<std::uint64_t> classes;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
    if (std::popcount(mask) > cap) continue;
    if (planar_filter) {
      const BufferGraph g = BufferGraph::from_mask(n_buffer, mask);
      if (!is_planar(g)) continue;
    }
    if (up_to_isomorphism) {
      classes.insert(canonical_code_of_mask(n_buffer, mask));
    } else {
      masks.push_back(mask);
    }
  }
  if (up_to_isomorphism) masks.assign(classes.begin(), classes.end());
  std::sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::vector<BufferGraph> out;
  out.reserve(masks.size());
  for (auto m : masks) out.push_back(BufferGraph::from_mask(n_buffer, m));
  return out;
}

BufferGraph extreme_geometry(int n_buffer, Extreme which) {
  if (n_buffer < 2 || n_buffer > 6) {
    throw std::invalid_argument("extreme_geometry: N must be in 2..6");
  }
  if (which == Extreme::empty) return BufferGraph(n_buffer);
  std::vector<Edge> edges;
  for (int a = 2; a <= n_buffer + 1; ++a) {
    for (int b = a + 1; b <= n_buffer + 1; ++b) edges.push_back({a, b});
  }
  if (n_buffer == 5) {
    // K5 minus one edge.
    std::erase(edges, Edge{5, 6});
  } else if (n_buffer == 6) {
    // K6 minus the path 5-6-7-4: the triangulation with degrees 3,3,4,4,5,5.
    std::erase(edges, Edge{5, 6});
    std::erase(edges, Edge{6, 7});
    std::erase(edges, Edge{4, 7});
  }
  return BufferGraph(n_buffer, std::move(edges));
}

std::string to_string(Extreme e) { return e == Extreme::empty ? "empty" : "maximal"; }

Extreme parse_extreme(std::string_view s) {
  if (s == "empty") return Extreme::empty;
  if (s == "maximal") return Extreme::maximal;
  throw ParseError("unknown geometry '" + std::string(s) + "' (expected empty|maximal)");
}

std::string to_edge_list(const BufferGraph& g) {
  std::ostringstream os;
  os << "N=" << g.n_buffer() << "; edges=";
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    if (k) os << ',';
    os << '(' << g.edges()[k].u << ',' << g.edges()[k].v << ')';
  }
  return os.str();
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }
  void expect_word(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) fail("expected '" + std::string(word) + "'");
    pos_ += word.size();
  }
  int integer() {
    skip_space();
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc{}) fail("expected integer");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }
  bool at_end() {
    skip_space();
    return pos_ == text_.size();
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("edge list: " + what + " at offset " + std::to_string(pos_) + " in '" +
                     std::string(text_) + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

BufferGraph parse_edge_list(std::string_view text) {
  Cursor cur(text);
  cur.expect_word("N");
  cur.expect('=');
  const int n = cur.integer();
  if (n < 0 || n > kMaxGraphBuffer) cur.fail("buffer size out of range");
  std::vector<Edge> edges;
  if (cur.consume(';')) {
    cur.expect_word("edges");
    cur.expect('=');
    if (!cur.at_end()) {
      do {
        cur.expect('(');
        const int a = cur.integer();
        cur.expect(',');
        const int b = cur.integer();
        cur.expect(')');
        edges.push_back({a, b});
      } while (cur.consume(','));
    }
  }
  if (!cur.at_end()) cur.fail("trailing characters");
  try {
    return BufferGraph(n, std::move(edges));
  } catch (const ValidationError& e) {
    throw ParseError(std::string("edge list: ") + e.what());
  }
}

}  // namespace spinshield
