#include "doctest.h"
#include "fpk/treed.hpp"

using namespace fpk;

namespace {

// single disk carrying the root, with the given labels
TreedType one_disk(int maslov, int fiber, const MorseLabel& out) {
  TreedType t;
  t.vertices.push_back({VertexKind::disk, maslov, fiber, false});
  TreedEdge root;
  root.kind = EdgeKind::root_marking;
  root.tail = 0;
  root.label = out;
  t.edges.push_back(root);
  return t;
}

} // namespace

TEST_CASE("index of a single disk") {
  // I = 2, dim W+(x0) = 0, no leaves or nodes: 0 + 2 + 0 - 2 = 0
  TreedType t = one_disk(2, 0, {0, 0});
  CHECK(treed_index(t).total == 0);
}

TEST_CASE("a zero-length node drops the index by one") {
  TreedType t = one_disk(2, 0, {0, 0});
  t.vertices.push_back({VertexKind::disk, 0, 0, false});
  TreedEdge node;
  node.kind = EdgeKind::boundary_node;
  node.tail = 0;
  node.head = 1;
  node.length = LengthClass::zero;
  t.edges.push_back(node);
  CHECK(treed_index(t).total == -1);
}

TEST_CASE("an interior marking of multiplicity one compensates maslov four") {
  TreedType t = one_disk(4, 0, {0, 0});
  TreedEdge m;
  m.kind = EdgeKind::interior_marking;
  m.tail = 0;
  m.multiplicity = 1;
  t.edges.push_back(m);
  CHECK(treed_index(t).total == 0);
}

TEST_CASE("leaves enter through count and labels") {
  TreedType t = one_disk(2, 0, {3, 1});
  TreedEdge leaf;
  leaf.kind = EdgeKind::leaf_marking;
  leaf.tail = 0;
  leaf.label = {1, 0};
  t.edges.push_back(leaf);
  // 4 - 1 + 2 + 1 - 2 = 4
  CHECK(treed_index(t).total == 4);
}

TEST_CASE("stabilization fixes unmarked stable types") {
  TreedType t = one_disk(2, 0, {1, 0});
  TreedEdge leaf1, leaf2;
  leaf1.kind = EdgeKind::leaf_marking;
  leaf1.tail = 0;
  leaf2 = leaf1;
  t.edges.push_back(leaf1);
  t.edges.push_back(leaf2);
  TreedType s = pi_stabilize(t);
  CHECK(s.vertices.size() == 1);
  CHECK(s.edges.size() == 3);
  CHECK(treed_index(s).total == treed_index(t).total);
}

TEST_CASE("a marked vertical disk at a zero node is forgotten") {
  // base disk with root + marked vertical disk (I = I_F = 2) at a zero node
  TreedType t = one_disk(2, 0, {0, 0});
  t.vertices.push_back({VertexKind::disk, 2, 2, true});
  TreedEdge node;
  node.kind = EdgeKind::boundary_node;
  node.tail = 0;
  node.head = 1;
  node.length = LengthClass::zero;
  t.edges.push_back(node);
  t.validate();
  TreedType s = pi_stabilize(t);
  CHECK(s.vertices.size() == 1);
  CHECK(s.edges.size() == 1);  // just the root
  // the identity between the two routes
  ProjectedIndex p = projected_index(t);
  CHECK(p.total == treed_index(s).total);
  CHECK(p.forgotten_nodes == 1);
  // one forgotten node against vertical index two: net drop of one plus the
  // output's fiber dimension
  CHECK(p.total == p.base_index - 1 - p.output_fiber_dim);
}

TEST_CASE("a marked leaf vertex with one edge is removed") {
  TreedType t = one_disk(2, 0, {0, 0});
  t.vertices.push_back({VertexKind::disk, 0, 0, true});
  TreedEdge node;
  node.kind = EdgeKind::boundary_node;
  node.tail = 0;
  node.head = 1;
  node.length = LengthClass::finite;
  t.edges.push_back(node);
  TreedType s = pi_stabilize(t);
  CHECK(s.vertices.size() == 1);
  CHECK(s.edges.size() == 1);
}

TEST_CASE("pi_stabilize is idempotent on random types") {
  TypeGenerator gen(7);
  for (int trial = 0; trial < 500; ++trial) {
    TreedType t = gen.random_type();
    TreedType once = pi_stabilize(t);
    TreedType twice = pi_stabilize(once);
    CHECK(treed_index(once).total == treed_index(twice).total);
    CHECK(once.vertices.size() == twice.vertices.size());
    CHECK(once.edges.size() == twice.edges.size());
  }
}

TEST_CASE("projected index agrees with stabilize-then-count on random types") {
  TypeGenerator gen(8);
  for (int trial = 0; trial < 1500; ++trial) {
    TreedType t = gen.random_type();
    ProjectedIndex p = projected_index(t);
    IndexBreakdown direct = treed_index(pi_stabilize(t));
    CHECK(p.total == direct.total);
  }
}

TEST_CASE("lift types have zero drop except the fiber output dimension") {
  TypeGenerator gen(9);
  for (int trial = 0; trial < 200; ++trial) {
    TreedType t = gen.random_lift_type();
    ProjectedIndex p = projected_index(t);
    CHECK(p.fiber_index_sum == 0);
    CHECK(p.forgotten_nodes == 0);
    CHECK(p.total == p.base_index - p.output_fiber_dim);
  }
}

TEST_CASE("lifted index adds the fiber dimension") {
  TreedType t = one_disk(2, 0, {0, 0});
  IndexBreakdown b = treed_index(t);
  CHECK(lifted_index(b, 0) == 0);
  CHECK(lifted_index(b, 2) == 2);
  TreedType t1 = one_disk(2, 0, {1, 0});
  CHECK(lifted_index(treed_index(t1), 0) == 1);
}

TEST_CASE("projection inequalities") {
  // fiberwise-maximal lift of an index-zero disk: both indices zero
  TreedType t = one_disk(2, 0, {0, 0});
  t.realizable = true;
  ProjectionCheck check = projection_inequality_check(t);
  CHECK(check.status == ProjectionStatus::holds);
  CHECK(check.index_original == 0);
  CHECK(check.index_projected == 0);
  CHECK(check.lower_bound_checked);

  // negative fiber index violates the hypotheses
  TreedType bad = one_disk(2, -2, {0, 0});
  CHECK(projection_inequality_check(bad).status == ProjectionStatus::hypothesis_violated);
}

TEST_CASE("projection inequalities hold on generated admissible types") {
  TypeGenerator gen(10);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    TreedType t = gen.random_hypothesis_type();
    ProjectionCheck check = projection_inequality_check(t);
    if (check.status == ProjectionStatus::hypothesis_violated)
      continue;
    ++checked;
    CHECK(check.status == ProjectionStatus::holds);
  }
  CHECK(checked > 500);
  // realizable lift types also satisfy the lower bound
  for (int trial = 0; trial < 300; ++trial) {
    TreedType t = gen.random_lift_type();
    ProjectionCheck check = projection_inequality_check(t);
    REQUIRE(check.status == ProjectionStatus::holds);
    CHECK(check.lower_bound_checked);
    CHECK(check.index_projected >= 0);
  }
}

TEST_CASE("index bookkeeping under cutting an infinite edge") {
  TypeGenerator gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    TreedType t = gen.random_broken_type();
    MorseLabel broken{1, 1};
    auto [near_piece, far_piece] = cut_infinite_edge(t, broken);
    near_piece.validate();
    far_piece.validate();
    int pieces = treed_index(near_piece).total + treed_index(far_piece).total;
    CHECK(treed_index(t).total == pieces);
    // making the cut edge finite adds the gluing direction
    TreedType glued = t;
    for (auto& e : glued.edges)
      if (e.kind == EdgeKind::boundary_node && e.length == LengthClass::infinite) {
        e.length = LengthClass::finite;
        break;
      }
    CHECK(treed_index(glued).total == pieces + 1);
  }
}

TEST_CASE("validation rejects malformed types") {
  TreedType t;
  t.vertices.push_back({VertexKind::disk, 2, 0, false});
  CHECK_THROWS_AS(t.validate(), ConfigError);  // no root
  TreedEdge root;
  root.kind = EdgeKind::root_marking;
  root.tail = 0;
  t.edges.push_back(root);
  t.validate();
  t.vertices[0].index_label = 1;
  CHECK_THROWS_AS(t.validate(), ConfigError);  // odd index
  t.vertices[0].index_label = 2;
  // boundary edges cannot meet spheres
  TreedType s = one_disk(2, 0, {0, 0});
  s.vertices.push_back({VertexKind::sphere, 2, 0, false});
  TreedEdge bad;
  bad.kind = EdgeKind::boundary_node;
  bad.tail = 0;
  bad.head = 1;
  s.edges.push_back(bad);
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("spherical and broken types are unsupported by projection") {
  TreedType t = one_disk(2, 0, {0, 0});
  t.vertices.push_back({VertexKind::sphere, 2, 0, false});
  TreedEdge node;
  node.kind = EdgeKind::interior_node;
  node.tail = 0;
  node.head = 1;
  t.edges.push_back(node);
  CHECK_THROWS_AS(projected_index(t), Unsupported);

  TypeGenerator gen(12);
  TreedType broken = gen.random_broken_type();
  CHECK_THROWS_AS(projected_index(broken), Unsupported);
}
