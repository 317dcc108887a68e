#ifndef FPK_TORIC_HPP
#define FPK_TORIC_HPP

#include <vector>

#include "fpk/laurent.hpp"

namespace fpk {

struct Facet {
  std::vector<Int> normal;  // primitive
  Rat offset;               // half-space <normal, u> >= offset
};

// Facet presentation of a compact full-dimensional toric moment polytope,
// together with the symplectic scale multiplier.
class MomentPolytope {
public:
  MomentPolytope(long dimension, std::vector<Facet> facets, Rat scale = Rat(1));
  static MomentPolytope simplex(long dimension, Rat scale = Rat(1));  // unit simplex
  static MomentPolytope point();                                      // 0-dimensional fiber

  long dimension() const { return dimension_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const Rat& scale() const { return scale_; }
  Rat slack(const Facet& f, const std::vector<Rat>& u) const;

private:
  long dimension_ = 0;
  std::vector<Facet> facets_;
  Rat scale_ = Rat(1);

  void validate() const;
};

struct InteriorPoint {
  std::vector<Rat> coords;
};

struct DiskClass {
  std::size_t facet_index = 0;
  std::vector<Int> boundary_class;
  Rat area = Rat(0);
  int maslov = 2;
};

// Checks that the point is strictly interior; InvalidPoint otherwise.
void require_interior(const MomentPolytope& p, const InteriorPoint& u);

// One Maslov-2 class per facet; area is the scaled affine distance.
std::vector<DiskClass> disk_classes(const MomentPolytope& p, const InteriorPoint& u);

enum class FormalVariable { q, r };

// Sum over facets of z^(facet normal) weighted by the disk area in the chosen
// formal variable, with per-term disk metadata attached.
LaurentQR toric_potential(const MomentPolytope& p, const InteriorPoint& u, const VarSet& vars,
                          FormalVariable formal, const Rat& epsilon, const Rat& cutoff,
                          const std::string& output_tag = "x_M",
                          const std::string& label_prefix = "disk");

struct MonotoneResult {
  bool monotone = false;
  std::vector<Rat> distances;
};

MonotoneResult monotone_check(const MomentPolytope& p, const InteriorPoint& u);

} // namespace fpk

#endif
