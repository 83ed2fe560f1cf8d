#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scengen/dependence.hpp"
#include "scengen/parallel.hpp"
#include "scengen/rng.hpp"

namespace scengen {

/// Edge of tree T_j. In T_1 `left`/`right` index variables; in T_j (j >= 2)
/// they index edges of T_{j-1}.
struct VineEdge {
  std::size_t left = 0;
  std::size_t right = 0;
  std::pair<std::size_t, std::size_t> conditioned;
  std::vector<std::size_t> conditioning;  // ascending
};

/// Nested trees T_1..T_{n-1} over variables 0..n_vars-1.
struct VineStructure {
  std::size_t n_vars = 0;
  std::vector<std::vector<VineEdge>> trees;
};

struct VineValidation {
  bool ok = true;
  std::string violation;

  explicit operator bool() const { return ok; }
};

/// Checks edge counts, that every tree spans its node set, the proximity
/// condition, and each edge's conditioned/conditioning sets. Reports the
/// first violated condition.
VineValidation validate_regular_vine(const VineStructure& v);

/// Builds a structure from node pairs per tree, deriving the conditioned and
/// conditioning sets of every edge from its two nodes.
VineStructure make_vine(std::size_t n_vars, const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& node_pairs);

/// Path-shaped vine over variables in index order.
VineStructure dvine_structure(std::size_t n_vars);
/// Star-shaped vine with variable k as the hub of tree k+1.
VineStructure cvine_structure(std::size_t n_vars);

bool is_dvine(const VineStructure& v);
bool is_cvine(const VineStructure& v);

/// D-vine over `order` with one (conditional) rank correlation per edge.
///
/// Level j (0-based) holds n - 1 - j values; entry i belongs to the edge
/// joining order[i] and order[i + j + 1] given the variables between them.
/// Pair copulas are Gaussian with sigma = rank_to_copula_sigma(rho).
struct DVineSpec {
  std::vector<std::string> order;
  std::vector<std::vector<double>> edge_rank_corrs;
  std::vector<std::vector<double>> edge_sigmas;

  std::size_t dimension() const { return order.size(); }
  /// The vine graph, with variable indices referring to positions in `order`.
  VineStructure structure() const;
};

DVineSpec build_dvine(std::vector<std::string> order, std::vector<std::vector<double>> rank_corrs);

/// Places edge correlations so that the d-vine reproduces the full target
/// rank matrix under Gaussian pair copulas. Throws DataError when the target
/// is not PSD on the copula scale or conditioning becomes degenerate.
DVineSpec dvine_from_rank_matrix(const RankCorrelationMatrix& r, const std::vector<std::string>& order);

/// count x n uniforms, columns in `spec.order`. Row r consumes raw uniforms
/// rng.uniform(r * n + c), c = 0..n-1.
Eigen::MatrixXd sample_dvine(const DVineSpec& spec, std::size_t count, const SeededRng& rng,
                             const SamplingOptions& opts = {});

}  // namespace scengen
