#include "fpk/treed.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace fpk {

namespace {

bool is_node(const TreedEdge& e) {
  return e.kind == EdgeKind::boundary_node || e.kind == EdgeKind::interior_node;
}

bool is_marking(const TreedEdge& e) { return !is_node(e); }

std::vector<std::vector<std::size_t>> incidence(const TreedType& t) {
  std::vector<std::vector<std::size_t>> inc(t.vertices.size());
  for (std::size_t i = 0; i < t.edges.size(); ++i) {
    const TreedEdge& e = t.edges[i];
    inc[e.tail].push_back(i);
    if (e.head >= 0)
      inc[e.head].push_back(i);
  }
  return inc;
}

bool vertex_stable(const TreedType& t, const std::vector<std::vector<std::size_t>>& inc,
                   std::size_t v) {
  int boundary = 0, interior = 0;
  for (std::size_t ei : inc[v]) {
    const TreedEdge& e = t.edges[ei];
    switch (e.kind) {
      case EdgeKind::boundary_node:
      case EdgeKind::root_marking:
      case EdgeKind::leaf_marking:
        ++boundary;
        break;
      case EdgeKind::interior_node:
      case EdgeKind::interior_marking:
        ++interior;
        break;
    }
  }
  if (t.vertices[v].kind == VertexKind::sphere)
    return interior >= 3;
  return boundary + 2 * interior >= 3;
}

int count_zero_boundary_nodes(const TreedType& t) {
  int n = 0;
  for (const auto& e : t.edges)
    if (e.kind == EdgeKind::boundary_node && e.length == LengthClass::zero)
      ++n;
  return n;
}

// Removes tombstoned vertices/edges and remaps indices.
TreedType compact(const TreedType& t, const std::vector<bool>& dead_vertex,
                  const std::vector<bool>& dead_edge) {
  TreedType out;
  out.realizable = t.realizable;
  std::vector<int> remap(t.vertices.size(), -1);
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    if (dead_vertex[i])
      continue;
    remap[i] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(t.vertices[i]);
  }
  for (std::size_t i = 0; i < t.edges.size(); ++i) {
    if (dead_edge[i])
      continue;
    TreedEdge e = t.edges[i];
    e.tail = remap[e.tail];
    if (e.head >= 0)
      e.head = remap[e.head];
    out.edges.push_back(e);
  }
  return out;
}

// Step one of the projection: labels to their horizontal part, fiber Morse
// dims dropped, marked node edges forced to zero length.
TreedType pi_star(const TreedType& t) {
  TreedType out = t;
  for (auto& v : out.vertices) {
    v.index_label -= v.fiber_index;
    v.fiber_index = 0;
  }
  for (auto& e : out.edges) {
    if (e.kind == EdgeKind::root_marking || e.kind == EdgeKind::leaf_marking)
      e.label.fiber_dim = 0;
    if (e.kind == EdgeKind::boundary_node && e.marked)
      e.length = LengthClass::zero;
  }
  return out;
}

// Contracts marked boundary-node edges (now zero length).
TreedType collapse_marked(TreedType t) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
      TreedEdge& e = t.edges[i];
      if (e.kind != EdgeKind::boundary_node || !e.marked)
        continue;
      int keep = e.tail, drop = e.head;
      t.vertices[keep].index_label += t.vertices[drop].index_label;
      t.vertices[keep].fiber_index += t.vertices[drop].fiber_index;
      t.vertices[keep].marked = t.vertices[keep].marked && t.vertices[drop].marked;
      std::vector<bool> dead_vertex(t.vertices.size(), false), dead_edge(t.edges.size(), false);
      dead_vertex[drop] = true;
      dead_edge[i] = true;
      for (auto& other : t.edges) {
        if (other.tail == drop)
          other.tail = keep;
        if (other.head == drop)
          other.head = keep;
      }
      t = compact(t, dead_vertex, dead_edge);
      changed = true;
      break;
    }
  }
  return t;
}

LengthClass add_lengths(LengthClass a, LengthClass b) {
  if (a == LengthClass::infinite || b == LengthClass::infinite)
    return LengthClass::infinite;
  if (a == LengthClass::finite || b == LengthClass::finite)
    return LengthClass::finite;
  return LengthClass::zero;
}

// Forgets unstable class-zero vertices, identifying their edge pairs.
TreedType upsilon(TreedType t) {
  bool changed = true;
  while (changed) {
    changed = false;
    auto inc = incidence(t);
    for (std::size_t v = 0; v < t.vertices.size(); ++v) {
      if (t.vertices[v].index_label != 0 || t.vertices[v].fiber_index != 0)
        continue;
      if (vertex_stable(t, inc, v))
        continue;
      const auto& edges_at_v = inc[v];
      if (edges_at_v.size() == 2) {
        std::size_t ei = edges_at_v[0], fi = edges_at_v[1];
        const TreedEdge e = t.edges[ei];
        const TreedEdge f = t.edges[fi];
        if (is_node(e) && is_node(f)) {
          if (e.kind != f.kind)
            continue;  // boundary and interior nodes never merge
          TreedEdge merged = e;
          merged.tail = e.tail == static_cast<int>(v) ? e.head : e.tail;
          merged.head = f.tail == static_cast<int>(v) ? f.head : f.tail;
          merged.marked = e.marked && f.marked;
          if (merged.kind == EdgeKind::boundary_node)
            merged.length = add_lengths(e.length, f.length);
          t.edges.push_back(merged);
          std::vector<bool> dead_vertex(t.vertices.size(), false),
              dead_edge(t.edges.size(), false);
          dead_vertex[v] = true;
          dead_edge[ei] = true;
          dead_edge[fi] = true;
          t = compact(t, dead_vertex, dead_edge);
          changed = true;
          break;
        }
        // a marking survives; semi-infinite edges absorb the node length
        const TreedEdge* marking = is_marking(e) ? &e : (is_marking(f) ? &f : nullptr);
        const TreedEdge* node = is_node(e) ? &e : (is_node(f) ? &f : nullptr);
        if (marking && node) {
          TreedEdge moved = *marking;
          moved.tail = node->tail == static_cast<int>(v) ? node->head : node->tail;
          t.edges.push_back(moved);
          std::vector<bool> dead_vertex(t.vertices.size(), false),
              dead_edge(t.edges.size(), false);
          dead_vertex[v] = true;
          dead_edge[ei] = true;
          dead_edge[fi] = true;
          t = compact(t, dead_vertex, dead_edge);
          changed = true;
          break;
        }
        continue;  // two markings on a lone vertex: kept as-is
      }
      if (edges_at_v.size() == 1) {
        std::size_t ei = edges_at_v[0];
        if (!is_node(t.edges[ei]))
          continue;
        std::vector<bool> dead_vertex(t.vertices.size(), false), dead_edge(t.edges.size(), false);
        dead_vertex[v] = true;
        dead_edge[ei] = true;
        t = compact(t, dead_vertex, dead_edge);
        changed = true;
        break;
      }
    }
  }
  return t;
}

} // namespace

void TreedType::validate() const {
  int roots = 0;
  for (const auto& v : vertices) {
    if (v.index_label % 2 != 0 || v.fiber_index % 2 != 0)
      throw ConfigError("vertex indices must be even");
    if (v.marked && v.index_label != v.fiber_index)
      throw ConfigError("marked vertices project to constants: I must equal I_F");
  }
  for (const auto& e : edges) {
    if (e.tail < 0 || e.tail >= static_cast<int>(vertices.size()))
      throw ConfigError("edge tail out of range");
    if (is_node(e)) {
      if (e.head < 0 || e.head >= static_cast<int>(vertices.size()))
        throw ConfigError("node edge head out of range");
    } else if (e.head != -1) {
      throw ConfigError("markings attach at a single vertex");
    }
    if (e.kind == EdgeKind::root_marking)
      ++roots;
    if (e.kind == EdgeKind::interior_marking && e.multiplicity < 0)
      throw ConfigError("negative intersection multiplicity");
    bool boundary_kind = e.kind == EdgeKind::boundary_node || e.kind == EdgeKind::root_marking ||
                         e.kind == EdgeKind::leaf_marking;
    if (boundary_kind) {
      if (vertices[e.tail].kind == VertexKind::sphere ||
          (e.head >= 0 && vertices[e.head].kind == VertexKind::sphere))
        throw ConfigError("no boundary edges at sphere vertices");
    }
  }
  if (roots != 1)
    throw ConfigError("a treed type carries exactly one root marking");
  // node edges must form a tree on the vertices
  std::size_t node_edges = 0;
  std::vector<std::vector<int>> adj(vertices.size());
  for (const auto& e : edges)
    if (is_node(e)) {
      ++node_edges;
      adj[e.tail].push_back(e.head);
      adj[e.head].push_back(e.tail);
    }
  if (node_edges + 1 != vertices.size())
    throw ConfigError("node edges must form a spanning tree");
  std::vector<bool> seen(vertices.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
  }
  if (reached != vertices.size())
    throw ConfigError("type is disconnected");
}

bool TreedType::is_broken() const {
  for (const auto& e : edges)
    if (e.kind == EdgeKind::boundary_node && e.length == LengthClass::infinite)
      return true;
  return false;
}

bool TreedType::has_spheres() const {
  for (const auto& v : vertices)
    if (v.kind == VertexKind::sphere)
      return true;
  return false;
}

bool TreedType::has_interior_nodes() const {
  for (const auto& e : edges)
    if (e.kind == EdgeKind::interior_node)
      return true;
  return false;
}

std::size_t TreedType::leaf_count() const {
  std::size_t n = 0;
  for (const auto& e : edges)
    if (e.kind == EdgeKind::leaf_marking)
      ++n;
  return n;
}

const TreedEdge& TreedType::root_edge() const {
  for (const auto& e : edges)
    if (e.kind == EdgeKind::root_marking)
      return e;
  throw ConfigError("type has no root marking");
}

IndexBreakdown treed_index(const TreedType& type) {
  IndexBreakdown b;
  b.output_dim = type.root_edge().label.total();
  for (const auto& e : type.edges) {
    switch (e.kind) {
      case EdgeKind::leaf_marking:
        b.input_dim_sum += e.label.total();
        break;
      case EdgeKind::boundary_node:
        if (e.length == LengthClass::zero)
          ++b.zero_edges;
        else if (e.length == LengthClass::infinite)
          ++b.infinite_edges;
        break;
      case EdgeKind::interior_node:
        ++b.interior_nodes;
        break;
      case EdgeKind::interior_marking:
        b.marking_multiplicity += e.multiplicity;
        break;
      case EdgeKind::root_marking:
        break;
    }
  }
  for (const auto& v : type.vertices)
    b.maslov_sum += v.index_label;
  b.leaf_term = static_cast<int>(type.leaf_count()) - 2;
  b.total = b.output_dim - b.input_dim_sum + b.maslov_sum + b.leaf_term - b.zero_edges -
            b.infinite_edges - 2 * b.interior_nodes - 2 * b.marking_multiplicity;
  return b;
}

TreedType pi_stabilize(const TreedType& type) {
  TreedType out = upsilon(collapse_marked(pi_star(type)));
  for (auto& v : out.vertices)
    v.marked = false;
  for (auto& e : out.edges)
    e.marked = false;
  return out;
}

ProjectedIndex projected_index(const TreedType& type) {
  if (type.is_broken())
    throw Unsupported("projected index needs an unbroken type");
  if (type.has_spheres() || type.has_interior_nodes())
    throw Unsupported("projected index needs an aspherical type");
  ProjectedIndex p;
  IndexBreakdown base = treed_index(type);
  p.base_index = base.total;
  // deduction changes are measured against the original type: a marked edge
  // only counts as a forgotten node if it deducted before the projection
  TreedType projected = upsilon(collapse_marked(pi_star(type)));
  p.forgotten_nodes = count_zero_boundary_nodes(type) - count_zero_boundary_nodes(projected);
  for (const auto& v : type.vertices)
    p.fiber_index_sum += v.fiber_index;
  p.output_fiber_dim = type.root_edge().label.fiber_dim;
  for (const auto& e : type.edges)
    if (e.kind == EdgeKind::leaf_marking)
      p.input_fiber_dim_sum += e.label.fiber_dim;
  // intersection multiplicities are preserved by the projection, so the
  // tangency correction vanishes
  p.total = p.base_index + p.forgotten_nodes - p.fiber_index_sum - p.output_fiber_dim +
            p.input_fiber_dim_sum;
  return p;
}

int lifted_index(const IndexBreakdown& base, int fiber_dim) { return base.total + fiber_dim; }

ProjectionCheck projection_inequality_check(const TreedType& type) {
  ProjectionCheck check;
  for (const auto& v : type.vertices)
    if (v.fiber_index < 0)
      return check;  // hypothesis_violated
  if (type.leaf_count() > 0)
    return check;
  if (type.is_broken() || type.has_spheres() || type.has_interior_nodes())
    return check;
  ProjectedIndex p = projected_index(type);
  if (p.forgotten_nodes > p.fiber_index_sum)
    return check;  // minimal fiber Maslov bound violated
  check.index_original = p.base_index;
  check.index_projected = p.total;
  bool upper = check.index_projected <= check.index_original;
  bool lower = true;
  if (type.realizable) {
    check.lower_bound_checked = true;
    lower = check.index_projected >= 0;
  }
  check.status = (upper && lower) ? ProjectionStatus::holds : ProjectionStatus::fails;
  return check;
}

std::pair<TreedType, TreedType> cut_infinite_edge(const TreedType& type,
                                                  const MorseLabel& broken_label) {
  std::size_t cut = type.edges.size();
  for (std::size_t i = 0; i < type.edges.size(); ++i)
    if (type.edges[i].kind == EdgeKind::boundary_node &&
        type.edges[i].length == LengthClass::infinite) {
      cut = i;
      break;
    }
  if (cut == type.edges.size())
    throw Unsupported("type has no infinite edge to cut");
  const TreedEdge& e = type.edges[cut];
  // component of the root after removing the cut edge
  std::vector<std::vector<int>> adj(type.vertices.size());
  for (std::size_t i = 0; i < type.edges.size(); ++i) {
    if (i == cut || !is_node(type.edges[i]))
      continue;
    adj[type.edges[i].tail].push_back(type.edges[i].head);
    adj[type.edges[i].head].push_back(type.edges[i].tail);
  }
  int root_vertex = type.root_edge().tail;
  std::vector<bool> root_side(type.vertices.size(), false);
  std::vector<int> stack{root_vertex};
  root_side[root_vertex] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!root_side[w]) {
        root_side[w] = true;
        stack.push_back(w);
      }
  }
  int near_end = root_side[e.tail] ? e.tail : e.head;
  int far_end = root_side[e.tail] ? e.head : e.tail;
  if (root_side[e.tail] == root_side[e.head])
    throw ConfigError("cut edge endpoints on the same side");

  auto build_piece = [&](bool keep_root_side, int attach, EdgeKind new_marking) {
    TreedType piece;
    piece.realizable = type.realizable;
    std::vector<int> remap(type.vertices.size(), -1);
    for (std::size_t v = 0; v < type.vertices.size(); ++v) {
      if (root_side[v] != keep_root_side)
        continue;
      remap[v] = static_cast<int>(piece.vertices.size());
      piece.vertices.push_back(type.vertices[v]);
    }
    for (std::size_t i = 0; i < type.edges.size(); ++i) {
      if (i == cut)
        continue;
      const TreedEdge& edge = type.edges[i];
      if (root_side[edge.tail] != keep_root_side)
        continue;
      TreedEdge copy = edge;
      copy.tail = remap[edge.tail];
      if (copy.head >= 0)
        copy.head = remap[edge.head];
      piece.edges.push_back(copy);
    }
    TreedEdge marking;
    marking.kind = new_marking;
    marking.tail = remap[attach];
    marking.head = -1;
    marking.label = broken_label;
    piece.edges.push_back(marking);
    return piece;
  };
  return {build_piece(true, near_end, EdgeKind::leaf_marking),
          build_piece(false, far_end, EdgeKind::root_marking)};
}

int TypeGenerator::uniform(int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  return dist(rng_);
}

TreedType TypeGenerator::random_tree(int max_vertices, bool allow_leaves, bool allow_marks) {
  TreedType t;
  int n = uniform(1, max_vertices);
  for (int i = 0; i < n; ++i) {
    TreedVertex v;
    v.kind = VertexKind::disk;
    v.index_label = 2 * uniform(0, 3);
    v.fiber_index = 2 * uniform(-1, 2);
    if (v.fiber_index > v.index_label)
      v.fiber_index = v.index_label;
    t.vertices.push_back(v);
  }
  for (int i = 1; i < n; ++i) {
    TreedEdge e;
    e.kind = EdgeKind::boundary_node;
    e.tail = uniform(0, i - 1);
    e.head = i;
    e.length = uniform(0, 2) == 0 ? LengthClass::zero : LengthClass::finite;
    e.marked = allow_marks && uniform(0, 3) == 0;
    t.edges.push_back(e);
  }
  if (allow_marks) {
    for (auto& v : t.vertices)
      if (uniform(0, 3) == 0) {
        v.marked = true;
        v.index_label = v.fiber_index;  // constant projection
      }
  }
  TreedEdge root;
  root.kind = EdgeKind::root_marking;
  root.tail = uniform(0, n - 1);
  root.label = {uniform(0, 3), uniform(0, 3)};
  t.edges.push_back(root);
  if (allow_leaves) {
    int leaves = uniform(0, 3);
    for (int i = 0; i < leaves; ++i) {
      TreedEdge leaf;
      leaf.kind = EdgeKind::leaf_marking;
      leaf.tail = uniform(0, n - 1);
      leaf.label = {uniform(0, 3), uniform(0, 3)};
      t.edges.push_back(leaf);
    }
  }
  int interior_markings = uniform(0, 2);
  for (int i = 0; i < interior_markings; ++i) {
    TreedEdge m;
    m.kind = EdgeKind::interior_marking;
    m.tail = uniform(0, n - 1);
    m.multiplicity = uniform(0, 3);
    t.edges.push_back(m);
  }
  t.validate();
  return t;
}

TreedType TypeGenerator::random_type(bool allow_leaves) {
  return random_tree(8, allow_leaves, true);
}

TreedType TypeGenerator::random_hypothesis_type() {
  TreedType t = random_tree(8, false, true);
  for (auto& v : t.vertices) {
    if (v.fiber_index < 0)
      v.fiber_index = 0;
    if (v.marked) {
      if (v.fiber_index == 0)
        v.fiber_index = 2;
      v.index_label = v.fiber_index;
    }
  }
  return t;
}

TreedType TypeGenerator::random_lift_type() {
  TreedType t = random_tree(8, false, false);
  for (auto& v : t.vertices) {
    v.fiber_index = 0;
    v.marked = false;
  }
  for (auto& e : t.edges)
    e.marked = false;
  // the projection of a regular lift is already stable: no ghost components
  auto inc = incidence(t);
  for (std::size_t v = 0; v < t.vertices.size(); ++v)
    if (t.vertices[v].index_label == 0 && !vertex_stable(t, inc, v))
      t.vertices[v].index_label = 2;
  // choose the output label so the base-type index is non-negative, then add
  // the fiber dimension on top: the projected index equals the base index
  for (auto& e : t.edges)
    if (e.kind == EdgeKind::root_marking)
      e.label.fiber_dim = 0;
  IndexBreakdown base = treed_index(t);
  if (base.total < 0) {
    for (auto& e : t.edges)
      if (e.kind == EdgeKind::root_marking)
        e.label.base_dim += -base.total;
  }
  for (auto& e : t.edges)
    if (e.kind == EdgeKind::root_marking)
      e.label.fiber_dim = uniform(0, 3);
  t.realizable = true;
  return t;
}

TreedType TypeGenerator::random_broken_type() {
  TreedType t = random_tree(8, true, false);
  while (t.vertices.size() < 2)
    t = random_tree(8, true, false);
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < t.edges.size(); ++i)
    if (t.edges[i].kind == EdgeKind::boundary_node)
      nodes.push_back(i);
  t.edges[nodes[uniform(0, static_cast<int>(nodes.size()) - 1)]].length = LengthClass::infinite;
  return t;
}

std::uint64_t generator_seed_from_env() {
  if (const char* env = std::getenv("FPK_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 20240817ull;
}

} // namespace fpk
