#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "pmaps/enumerate.hpp"
#include "pmaps/map.hpp"
#include "pmaps/map_io.hpp"

using namespace pmaps;

namespace {

RootedMap loop() { return RootedMap::from_sigma({1, 0}, 0); }
RootedMap bridge() { return RootedMap::from_sigma({0, 1}, 0); }
RootedMap triple_edge() { return parse_map("darts=6 sigma=(0 2 4)(1 5 3) alpha=(0 1)(2 3)(4 5) root=0"); }

RootedMap relabeled(const RootedMap& m, std::mt19937& rng) {
  const int n = m.num_darts();
  std::vector<Dart> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::shuffle(pi.begin(), pi.end(), rng);
  std::vector<Dart> sigma(n), alpha(n);
  for (Dart d = 0; d < n; ++d) {
    sigma[pi[d]] = pi[m.sigma(d)];
    alpha[pi[d]] = pi[m.alpha(d)];
  }
  return RootedMap(sigma, alpha, pi[m.root()]);
}

}  // namespace

TEST_CASE("faces of the smallest maps") {
  RootedMap a = RootedMap::atomic();
  CHECK(a.num_edges() == 0);
  CHECK(a.num_faces() == 1);
  CHECK(a.root_face_valency() == 0);

  RootedMap l = loop();
  CHECK(l.num_vertices() == 1);
  CHECK(l.num_faces() == 2);
  FaceInfo fl = faces(l);
  CHECK(fl.valency == std::vector<int>{1, 1});

  RootedMap b = bridge();
  CHECK(b.num_vertices() == 2);
  CHECK(b.num_faces() == 1);
  CHECK(faces(b).valency == std::vector<int>{2});

  RootedMap t = triple_edge();
  CHECK(t.num_faces() == 3);
  for (int v : faces(t).valency) CHECK(v == 2);
}

TEST_CASE("construction rejects invalid permutation pairs") {
  CHECK_THROWS_AS(RootedMap({0, 1}, {0, 1}, 0), MapError);        // alpha fixed point
  CHECK_THROWS_AS(RootedMap({0, 0}, {1, 0}, 0), MapError);        // sigma not a permutation
  CHECK_THROWS_AS(RootedMap({0, 1, 2, 3}, {1, 0, 3, 2}, 0), MapError);  // disconnected
  // a single vertex with two interleaved loops lives on the torus
  CHECK_THROWS_AS(RootedMap::from_sigma({2, 3, 1, 0}, 0), MapError);
  CHECK_THROWS_AS(parse_map("darts=2 sigma=(0 1) alpha=(0)(1) root=0"), MapError);
}

TEST_CASE("class membership of small maps") {
  CHECK_FALSE(class_membership(loop(), MapClass::Bipartite));
  CHECK(class_membership(bridge(), MapClass::Bipartite));
  CHECK(class_membership(triple_edge(), MapClass::TwoConnected));
  CHECK_FALSE(class_membership(loop(), MapClass::TwoConnected));
  CHECK_FALSE(class_membership(bridge(), MapClass::TwoConnected));
  // two loops on one vertex: the vertex separates them
  CHECK_FALSE(class_membership(RootedMap::from_sigma({2, 0, 3, 1}, 0), MapClass::TwoConnected));
  CHECK(class_membership(loop(), MapClass::All));
}

TEST_CASE("canonical codes") {
  CHECK(loop().canonical_code() != bridge().canonical_code());
  std::mt19937 rng(7);
  Enumerator e;
  for (int n = 1; n <= 5; ++n) {
    const auto& run = e.generate(n, MapClass::All);
    for (std::size_t i = 0; i < run.size(); i += 7) {
      RootedMap m = run.map(i);
      for (int r = 0; r < 3; ++r) CHECK(relabeled(m, rng).canonical_code() == m.canonical_code());
    }
  }
  std::set<CanonicalCode> codes;
  for (const auto& c : brute_force_maps(2)) codes.insert(c);
  CHECK(codes.size() == 9);
}

TEST_CASE("map invariants and predicate cross-checks on all maps with at most 6 edges") {
  Enumerator e;
  for (int n = 0; n <= 6; ++n) {
    const auto& run = e.generate(n, MapClass::All);
    for (std::size_t i = 0; i < run.size(); ++i) {
      RootedMap m = run.map(i);
      CHECK(m.num_vertices() - m.num_edges() + m.num_faces() == 2);
      FaceInfo f = faces(m);
      CHECK(std::accumulate(f.valency.begin(), f.valency.end(), 0) == 2 * n);
      CHECK(is_bipartite(m) == two_colorable(m));
      CHECK(is_two_connected(m) == (n >= 2 && connected_after_deleting_any_vertex(m) &&
                                    std::none_of(m.sigma_table().begin(), m.sigma_table().end(), [&](Dart d) {
                                      return m.vertex_of(d) == m.vertex_of(m.alpha(d));
                                    })));
      CHECK(m.max_degree() <= 2 * n);
    }
  }
}

TEST_CASE("partial simple boundaries") {
  CHECK(has_partial_simple_boundary(bridge(), 0));
  CHECK_FALSE(has_partial_simple_boundary(RootedMap::atomic(), 0));
  CHECK_FALSE(has_partial_simple_boundary(loop(), 1));
  CHECK(has_simple_boundary(loop()));
  CHECK_FALSE(has_simple_boundary(bridge()));
  CHECK(has_simple_boundary(triple_edge()));
  CHECK_THROWS_AS(has_partial_simple_boundary(loop(), -1), MapError);
}

TEST_CASE("text and binary formats round trip") {
  Enumerator e;
  const auto& run = e.generate(4, MapClass::All);
  std::vector<RootedMap> maps;
  std::string text;
  for (std::size_t i = 0; i < run.size(); ++i) {
    maps.push_back(run.map(i));
    text += format_map(maps.back()) + "\n";
  }
  auto back = parse_maps("# comment line\n" + text);
  REQUIRE(back.size() == maps.size());
  for (std::size_t i = 0; i < maps.size(); ++i) CHECK(back[i] == maps[i]);
  CHECK(parse_map(format_map(maps[3], true)) == maps[3]);
  CHECK(parse_map("darts=0 sigma=() alpha=() root=-1").is_atomic());

  std::stringstream bin;
  write_binary_maps(bin, maps);
  auto bback = read_binary_maps(bin);
  REQUIRE(bback.size() == maps.size());
  for (std::size_t i = 0; i < maps.size(); ++i) CHECK(bback[i] == maps[i]);
  std::stringstream bad("NOTAFILE....");
  CHECK_THROWS_AS(read_binary_maps(bad), MapError);
}
