#ifndef FPK_TREED_HPP
#define FPK_TREED_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fpk/rational.hpp"

namespace fpk {

enum class VertexKind { disk, sphere };
enum class LengthClass { zero, finite, infinite };
enum class EdgeKind { boundary_node, interior_node, root_marking, leaf_marking, interior_marking };

// dim W+ of a critical point of the adapted pseudo-gradient, split into its
// base and fiber parts.
struct MorseLabel {
  int base_dim = 0;
  int fiber_dim = 0;
  int total() const { return base_dim + fiber_dim; }
};

struct TreedVertex {
  VertexKind kind = VertexKind::disk;
  int index_label = 0;  // I(u_v), even
  int fiber_index = 0;  // I_F(u_v), even
  bool marked = false;  // binary marking: projects to a constant
};

// Markings attach at `tail` only (head = -1); node edges join two vertices.
struct TreedEdge {
  EdgeKind kind = EdgeKind::boundary_node;
  int tail = -1;
  int head = -1;
  LengthClass length = LengthClass::finite;  // boundary nodes only
  bool marked = false;
  int multiplicity = 0;  // interior markings
  MorseLabel label;      // root/leaf markings
};

struct TreedType {
  std::vector<TreedVertex> vertices;
  std::vector<TreedEdge> edges;
  bool realizable = false;  // generator assumption, never inferred

  void validate() const;
  bool is_broken() const;
  bool has_spheres() const;
  bool has_interior_nodes() const;
  std::size_t leaf_count() const;
  const TreedEdge& root_edge() const;
};

struct IndexBreakdown {
  int total = 0;
  int output_dim = 0;
  int input_dim_sum = 0;
  int maslov_sum = 0;
  int leaf_term = 0;  // n - 2
  int zero_edges = 0;
  int infinite_edges = 0;
  int interior_nodes = 0;
  int marking_multiplicity = 0;  // sum of m(e)
};

IndexBreakdown treed_index(const TreedType& type);

// Projection to the base followed by stabilization: vertex labels replaced by
// their horizontal part, marked node edges collapsed, unstable class-zero
// vertices forgotten with edge identification and length addition. Idempotent.
TreedType pi_stabilize(const TreedType& type);

struct ProjectedIndex {
  int total = 0;
  int base_index = 0;
  int forgotten_nodes = 0;
  int fiber_index_sum = 0;
  int output_fiber_dim = 0;
  int input_fiber_dim_sum = 0;
};

// Closed-form expected dimension of the projected type; Unsupported for
// broken or spherical input.
ProjectedIndex projected_index(const TreedType& type);

int lifted_index(const IndexBreakdown& base, int fiber_dim);

enum class ProjectionStatus { holds, fails, hypothesis_violated };

struct ProjectionCheck {
  ProjectionStatus status = ProjectionStatus::hypothesis_violated;
  int index_original = 0;
  int index_projected = 0;
  bool lower_bound_checked = false;
};

ProjectionCheck projection_inequality_check(const TreedType& type);

// Splits a broken type at its first infinite boundary node; the pieces share
// the supplied Morse label at the broken point.
std::pair<TreedType, TreedType> cut_infinite_edge(const TreedType& type,
                                                  const MorseLabel& broken_label);

// Seeded random combinatorial types within the documented bounds
// (<= 8 vertices, multiplicities <= 3, dims <= 6).
class TypeGenerator {
public:
  explicit TypeGenerator(std::uint64_t seed) : rng_(seed) {}

  TreedType random_type(bool allow_leaves = true);
  TreedType random_hypothesis_type();  // no leaves, fiber indices >= 0
  TreedType random_lift_type();        // fiber-trivial labels, marked nothing, realizable
  TreedType random_broken_type();

private:
  std::mt19937_64 rng_;
  int uniform(int lo, int hi);
  TreedType random_tree(int max_vertices, bool allow_leaves, bool allow_marks);
};

std::uint64_t generator_seed_from_env();

} // namespace fpk

#endif
