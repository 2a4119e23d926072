#include "pmaps/map.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace pmaps {

std::string to_string(MapClass cls) {
  switch (cls) {
    case MapClass::All: return "all";
    case MapClass::Bipartite: return "bipartite";
    case MapClass::TwoConnected: return "2conn";
  }
  return "?";
}

MapClass parse_map_class(const std::string& name) {
  if (name == "all") return MapClass::All;
  if (name == "bipartite") return MapClass::Bipartite;
  if (name == "2conn" || name == "twoconnected") return MapClass::TwoConnected;
  throw MapError("unknown map class '" + name + "' (expected all|bipartite|2conn)");
}

RootedMap::RootedMap() { build(); }

RootedMap::RootedMap(std::vector<Dart> sigma, std::vector<Dart> alpha, Dart root)
    : sigma_(std::move(sigma)), alpha_(std::move(alpha)), root_(root) {
  const int n = num_darts();
  if (static_cast<int>(alpha_.size()) != n) throw MapError("sigma and alpha sizes differ");
  if (n % 2 != 0) throw MapError("odd number of darts");
  if (n == 0) {
    if (root_ != kNoDart) throw MapError("atomic map must have root -1");
  } else if (root_ < 0 || root_ >= n) {
    throw MapError("root dart out of range");
  }
  std::vector<char> seen(n, 0);
  for (Dart d : sigma_) {
    if (d < 0 || d >= n || seen[d]) throw MapError("sigma is not a permutation");
    seen[d] = 1;
  }
  for (Dart d = 0; d < n; ++d) {
    Dart a = alpha_[d];
    if (a < 0 || a >= n) throw MapError("alpha out of range");
    if (a == d) throw MapError("alpha has a fixed point");
    if (alpha_[a] != d) throw MapError("alpha is not an involution");
  }
  build();
}

RootedMap RootedMap::from_sigma(std::vector<Dart> sigma, Dart root) {
  std::vector<Dart> alpha(sigma.size());
  for (std::size_t d = 0; d < alpha.size(); ++d) alpha[d] = static_cast<Dart>(d ^ 1);
  return RootedMap(std::move(sigma), std::move(alpha), root);
}

void RootedMap::build() {
  const int n = num_darts();
  if (n == 0) {
    num_vertices_ = 1;
    num_faces_ = 1;
    degree_ = {0};
    face_valency_ = {0};
    return;
  }
  sigma_inv_.assign(n, 0);
  for (Dart d = 0; d < n; ++d) sigma_inv_[sigma_[d]] = d;

  auto orbits = [n](const std::function<Dart(Dart)>& step, std::vector<int>& label,
                    std::vector<int>& sizes) {
    label.assign(n, -1);
    sizes.clear();
    for (Dart d = 0; d < n; ++d) {
      if (label[d] >= 0) continue;
      int id = static_cast<int>(sizes.size());
      int len = 0;
      Dart e = d;
      do {
        label[e] = id;
        ++len;
        e = step(e);
      } while (e != d);
      sizes.push_back(len);
    }
  };
  orbits([this](Dart d) { return sigma_[d]; }, vertex_, degree_);
  orbits([this](Dart d) { return sigma_[alpha_[d]]; }, face_, face_valency_);
  num_vertices_ = static_cast<int>(degree_.size());
  num_faces_ = static_cast<int>(face_valency_.size());

  // transitivity of <sigma, alpha>
  std::vector<char> seen(n, 0);
  std::vector<Dart> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    Dart d = stack.back();
    stack.pop_back();
    for (Dart e : {sigma_[d], alpha_[d]}) {
      if (!seen[e]) {
        seen[e] = 1;
        ++reached;
        stack.push_back(e);
      }
    }
  }
  if (reached != n) throw MapError("map is not connected");
  if (num_vertices_ - num_edges() + num_faces_ != 2) throw MapError("map is not planar (genus != 0)");
}

std::vector<Dart> RootedMap::root_boundary() const {
  std::vector<Dart> walk;
  if (is_atomic()) return walk;
  Dart d = root_;
  do {
    walk.push_back(d);
    d = phi(d);
  } while (d != root_);
  return walk;
}

RootedMap RootedMap::rerooted(Dart new_root) const {
  RootedMap m = *this;
  if (new_root < 0 || new_root >= num_darts()) throw MapError("root dart out of range");
  m.root_ = new_root;
  return m;
}

namespace {

// BFS relabeling; returns label[old] = new.
std::vector<Dart> bfs_labels(const RootedMap& m) {
  const int n = m.num_darts();
  std::vector<Dart> label(n, kNoDart), order;
  order.reserve(n);
  auto visit = [&](Dart d) {
    if (label[d] != kNoDart) return;
    label[d] = static_cast<Dart>(order.size());
    order.push_back(d);
    Dart a = m.alpha(d);
    label[a] = static_cast<Dart>(order.size());
    order.push_back(a);
  };
  visit(m.root());
  for (std::size_t i = 0; i < order.size(); ++i) visit(m.sigma(order[i]));
  return label;
}

}  // namespace

RootedMap RootedMap::canonical_form() const {
  if (is_atomic()) return *this;
  const int n = num_darts();
  auto label = bfs_labels(*this);
  std::vector<Dart> sigma(n);
  for (Dart d = 0; d < n; ++d) sigma[label[d]] = label[sigma_[d]];
  return from_sigma(std::move(sigma), 0);
}

CanonicalCode RootedMap::canonical_code() const {
  CanonicalCode code;
  if (is_atomic()) return code;
  const int n = num_darts();
  auto label = bfs_labels(*this);
  std::vector<Dart> sigma(n);
  for (Dart d = 0; d < n; ++d) sigma[label[d]] = label[sigma_[d]];
  if (n < 256) {
    code.bytes.resize(n);
    for (int i = 0; i < n; ++i) code.bytes[i] = static_cast<char>(sigma[i]);
  } else {
    code.bytes.resize(2 * n);
    for (int i = 0; i < n; ++i) {
      code.bytes[2 * i] = static_cast<char>(sigma[i] >> 8);
      code.bytes[2 * i + 1] = static_cast<char>(sigma[i] & 0xff);
    }
  }
  return code;
}

int RootedMap::max_degree() const { return *std::max_element(degree_.begin(), degree_.end()); }

FaceInfo faces(const RootedMap& map) {
  FaceInfo info;
  if (map.is_atomic()) {
    info.faces = {{}};
    info.valency = {0};
    return info;
  }
  const int n = map.num_darts();
  std::vector<char> seen(n, 0);
  auto add_face = [&](Dart start) {
    std::vector<Dart> cycle;
    Dart d = start;
    do {
      seen[d] = 1;
      cycle.push_back(d);
      d = map.phi(d);
    } while (d != start);
    info.valency.push_back(static_cast<int>(cycle.size()));
    info.faces.push_back(std::move(cycle));
  };
  add_face(map.root());
  info.root_face = 0;
  for (Dart d = 0; d < n; ++d)
    if (!seen[d]) add_face(d);
  return info;
}

bool is_bipartite(const RootedMap& map) {
  for (int f = 0; f < map.num_faces(); ++f)
    if (map.face_valency(f) % 2 != 0) return false;
  return true;
}

std::vector<std::vector<int>> vertex_adjacency(const RootedMap& map) {
  std::vector<std::vector<int>> adj(map.num_vertices());
  for (Dart d = 0; d < map.num_darts(); ++d)
    adj[map.vertex_of(d)].push_back(map.vertex_of(map.alpha(d)));
  return adj;
}

bool two_colorable(const RootedMap& map) {
  auto adj = vertex_adjacency(map);
  std::vector<int> color(adj.size(), -1);
  color[0] = 0;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (color[w] < 0) {
        color[w] = 1 - color[v];
        stack.push_back(w);
      } else if (color[w] == color[v]) {
        return false;
      }
    }
  }
  return true;
}

namespace {

// Tarjan articulation points on the underlying multigraph. Parallel edges
// are handled by skipping only the tree edge's own dart pair.
bool has_cut_vertex(const RootedMap& map) {
  const int nv = map.num_vertices();
  std::vector<int> disc(nv, -1), low(nv, 0);
  int timer = 0;
  bool cut = false;
  std::function<void(int, Dart)> dfs = [&](int v, Dart via) {
    disc[v] = low[v] = timer++;
    int children = 0;
    for (Dart d = 0; d < map.num_darts(); ++d) {
      if (map.vertex_of(d) != v) continue;
      if (via != kNoDart && d == map.alpha(via)) continue;
      int w = map.vertex_of(map.alpha(d));
      if (disc[w] < 0) {
        ++children;
        dfs(w, d);
        low[v] = std::min(low[v], low[w]);
        if (via != kNoDart && low[w] >= disc[v]) cut = true;
      } else {
        low[v] = std::min(low[v], disc[w]);
      }
    }
    if (via == kNoDart && children > 1) cut = true;
  };
  dfs(0, kNoDart);
  return cut;
}

}  // namespace

bool is_two_connected(const RootedMap& map) {
  // Nonseparable maps with at least two edges: loopless, no cut vertex.
  if (map.num_edges() < 2) return false;
  for (Dart d = 0; d < map.num_darts(); ++d)
    if (map.vertex_of(d) == map.vertex_of(map.alpha(d))) return false;
  return !has_cut_vertex(map);
}

bool connected_after_deleting_any_vertex(const RootedMap& map) {
  auto adj = vertex_adjacency(map);
  const int nv = static_cast<int>(adj.size());
  for (int removed = 0; removed < nv; ++removed) {
    if (nv <= 1) break;
    int start = removed == 0 ? 1 : 0;
    std::vector<char> seen(nv, 0);
    seen[removed] = 1;
    seen[start] = 1;
    std::vector<int> stack{start};
    int reached = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
    }
    if (reached != nv - 1) return false;
  }
  return true;
}

bool class_membership(const RootedMap& map, MapClass cls) {
  switch (cls) {
    case MapClass::All: return true;
    case MapClass::Bipartite: return is_bipartite(map);
    case MapClass::TwoConnected: return is_two_connected(map);
  }
  return false;
}

bool has_partial_simple_boundary(const RootedMap& map, int i) {
  if (i < 0) throw MapError("partial boundary length must be non-negative");
  if (map.root_face_valency() <= i) return false;
  std::vector<char> seen(map.num_vertices(), 0);
  Dart d = map.root();
  for (int step = 0; step <= i; ++step) {
    int v = map.vertex_of(d);
    if (seen[v]) return false;
    seen[v] = 1;
    d = map.phi(d);
  }
  return true;
}

bool has_simple_boundary(const RootedMap& map) {
  if (map.is_atomic()) return false;
  const int k = map.root_face_valency();
  if (!has_partial_simple_boundary(map, k - 1)) return false;
  // k == 2 with a single edge traversed twice is the bridge
  return !(k == 2 && map.alpha(map.root()) == map.phi(map.root()));
}

CanonicalCode canonical_code(const RootedMap& map) { return map.canonical_code(); }

}  // namespace pmaps
