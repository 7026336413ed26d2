#pragma once

#include "diracham/scalar.hpp"

namespace diracham {

// Periodic hypercubic lattice. Sites are numbered x + N*(y + N*z).
// The spacing is kept exact so the rational backend sees v = dx^dim exactly.
class LatticeSpec {
 public:
  LatticeSpec(int dimension, int sites_per_axis, Rational spacing);

  int dimension() const { return dimension_; }
  int sites_per_axis() const { return sites_per_axis_; }
  int total_sites() const;
  double spacing() const;
  const Rational& exact_spacing() const { return spacing_; }
  double cell_volume() const;
  Rational exact_cell_volume() const;

  int neighbor(int site, int axis, int step) const;
  int coordinate(int site, int axis) const;

  // Throws unless every axis has both neighbours distinct from the site.
  void require_stencil() const;

 private:
  int dimension_;
  int sites_per_axis_;
  Rational spacing_;
};

}  // namespace diracham
