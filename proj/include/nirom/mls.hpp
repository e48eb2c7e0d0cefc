#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nirom/core_data.hpp"
#include "nirom/types.hpp"

namespace nirom {

struct MlsConfig {
  int order = 3;                      // total degree s
  double kernel_len = 3.0;            // initial support radius, in grid spacings
  double min_neighbor_factor = 1.5;   // neighbours needed per polynomial term
  double growth = 1.5;
  int max_growth_steps = 5;

  void validate() const;
  int term_count(int dim) const { return polynomial_term_count(dim, order); }
};

/// Wendland C2 weight (1-q)^4 (4q+1) for q < 1, zero otherwise.
double wendland_c2(double q);

/// Weighted least-squares polynomial coefficients in the basis centred at xp and scaled by h.
/// The fitted value at xp is the first coefficient.
Vector mls_fit(const Eigen::Ref<const Eigen::RowVectorXd>& xp, const Matrix& points, const Vector& values,
               double h, const MlsConfig& cfg);

struct MlsNodeReport {
  Index node = 0;
  double h = 0.0;
  Index neighbors = 0;
  double before = 0.0;
  double after = 0.0;
  bool corrected = false;
  std::string note;
};

struct MlsCorrection {
  Vector field;
  std::vector<MlsNodeReport> report;

  std::vector<Index> corrected_nodes() const;
  std::vector<Index> skipped_nodes() const;
};

/// Replaces each exposed node with an MLS fit over nodes flagged in `fluid_history`.
/// The support grows geometrically until the neighbour requirement holds; nodes that
/// never reach it stay uncorrected and are listed in the report.
MlsCorrection correct_field(const Vector& field, const std::vector<Index>& exposed, const DomainMask& fluid_history,
                            const SpatialGrid& grid, const MlsConfig& cfg);

/// CSV columns: node, h, neighbors, before, after, corrected.
void write_correction_report(const std::filesystem::path& path, const std::vector<MlsNodeReport>& report);

}  // namespace nirom
