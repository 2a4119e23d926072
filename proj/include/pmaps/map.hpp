#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmaps {

// Half-edge index. Darts of a map with m edges are 0..2m-1.
using Dart = int;
inline constexpr Dart kNoDart = -1;

class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MapClass { All, Bipartite, TwoConnected };

std::string to_string(MapClass cls);
MapClass parse_map_class(const std::string& name);

// Canonical code of a rooted map: the sigma table after relabeling darts in
// breadth-first order from the root, where each newly reached dart d gets the
// next even label and alpha(d) the following odd one. Rooted maps have no
// nontrivial root-fixing automorphism, so equal codes mean isomorphic maps.
struct CanonicalCode {
  std::string bytes;

  friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
  friend auto operator<=>(const CanonicalCode& a, const CanonicalCode& b) {
    return a.bytes <=> b.bytes;
  }
};

struct CanonicalCodeHash {
  std::size_t operator()(const CanonicalCode& c) const noexcept {
    return std::hash<std::string>{}(c.bytes);
  }
};

// Faces are the orbits of phi = sigma o alpha, i.e. phi(d) = sigma(alpha(d)).
// Dart d runs from vertex_of(d) to vertex_of(alpha(d)). The root face is the
// phi-orbit containing the root dart; walking it from the root dart is the
// boundary walk used everywhere (partial simple boundaries, pattern
// boundaries, gluing).
struct FaceInfo {
  std::vector<std::vector<Dart>> faces;  // each face listed from its smallest dart
                                         // (root face listed from the root dart)
  std::vector<int> valency;
  int root_face = 0;
};

// Rooted planar map stored as a rotation system. Immutable after
// construction; the constructor checks that alpha is a fixed-point-free
// involution, that <sigma, alpha> is transitive and that the genus is 0.
class RootedMap {
 public:
  // The atomic map: one vertex, no edges, one face of valency 0.
  RootedMap();
  RootedMap(std::vector<Dart> sigma, std::vector<Dart> alpha, Dart root);

  static RootedMap atomic() { return RootedMap(); }
  // Maps where alpha pairs 2i with 2i+1; only sigma and root are needed.
  static RootedMap from_sigma(std::vector<Dart> sigma, Dart root);

  int num_darts() const { return static_cast<int>(sigma_.size()); }
  int num_edges() const { return num_darts() / 2; }
  int num_vertices() const { return num_vertices_; }
  int num_faces() const { return num_faces_; }
  Dart root() const { return root_; }
  bool is_atomic() const { return sigma_.empty(); }

  Dart sigma(Dart d) const { return sigma_[d]; }
  Dart sigma_inv(Dart d) const { return sigma_inv_[d]; }
  Dart alpha(Dart d) const { return alpha_[d]; }
  Dart phi(Dart d) const { return sigma_[alpha_[d]]; }
  Dart phi_inv(Dart d) const { return alpha_[sigma_inv_[d]]; }

  int vertex_of(Dart d) const { return vertex_[d]; }
  int face_of(Dart d) const { return face_[d]; }
  int degree(int vertex) const { return degree_[vertex]; }
  int face_valency(int face) const { return face_valency_[face]; }
  int root_vertex() const { return is_atomic() ? 0 : vertex_[root_]; }
  int root_face() const { return is_atomic() ? 0 : face_[root_]; }
  int root_face_valency() const { return is_atomic() ? 0 : face_valency_[face_[root_]]; }

  const std::vector<Dart>& sigma_table() const { return sigma_; }
  const std::vector<Dart>& alpha_table() const { return alpha_; }

  // Darts of the root face in boundary-walk order, starting at the root dart.
  std::vector<Dart> root_boundary() const;
  // Same map with a different root dart.
  RootedMap rerooted(Dart new_root) const;
  // Relabels darts in canonical BFS order (alpha becomes d <-> d^1).
  RootedMap canonical_form() const;
  CanonicalCode canonical_code() const;

  int max_degree() const;

  friend bool operator==(const RootedMap& a, const RootedMap& b) {
    return a.sigma_ == b.sigma_ && a.alpha_ == b.alpha_ && a.root_ == b.root_;
  }

 private:
  void build();

  std::vector<Dart> sigma_, sigma_inv_, alpha_;
  Dart root_ = kNoDart;
  std::vector<int> vertex_, face_, degree_, face_valency_;
  int num_vertices_ = 1;
  int num_faces_ = 1;
};

FaceInfo faces(const RootedMap& map);

bool is_bipartite(const RootedMap& map);
bool is_two_connected(const RootedMap& map);
bool class_membership(const RootedMap& map, MapClass cls);

// Valency > i and the first i steps of the root face walk visit i+1 pairwise
// distinct vertices (hence i distinct edges).
bool has_partial_simple_boundary(const RootedMap& map, int i);
// Root face boundary is a simple closed walk: distinct vertices and distinct
// edges. The single bridge is excluded; the single loop is included.
bool has_simple_boundary(const RootedMap& map);

CanonicalCode canonical_code(const RootedMap& map);

// Underlying multigraph helpers, used by the class predicates and tests.
std::vector<std::vector<int>> vertex_adjacency(const RootedMap& map);
bool two_colorable(const RootedMap& map);
bool connected_after_deleting_any_vertex(const RootedMap& map);

}  // namespace pmaps
