#include "scengen/vine.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "scengen/error.hpp"
#include "scengen/gaussian_copula.hpp"

namespace scengen {

namespace {

using NodeSet = std::vector<std::size_t>;  // ascending

NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string edge_label(std::size_t tree, std::size_t edge) {
  return "T" + std::to_string(tree + 1) + " edge " + std::to_string(edge);
}

// Spanning-tree check via union-find.
bool spans(std::size_t nodes, const std::vector<VineEdge>& edges) {
  std::vector<std::size_t> parent(nodes);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    auto a = find(e.left), b = find(e.right);
    if (a == b) return false;
    parent[a] = b;
  }
  return edges.size() + 1 == nodes;
}

}  // namespace

VineValidation validate_regular_vine(const VineStructure& v) {
  auto fail = [](std::string msg) { return VineValidation{false, std::move(msg)}; };
  const std::size_t n = v.n_vars;
  if (n < 2) return fail("a vine needs at least 2 variables");
  if (v.trees.size() != n - 1)
    return fail("expected " + std::to_string(n - 1) + " trees, found " + std::to_string(v.trees.size()));

  // Complete union of every node of the current tree.
  std::vector<NodeSet> node_union(n);
  for (std::size_t i = 0; i < n; ++i) node_union[i] = {i};

  for (std::size_t t = 0; t < v.trees.size(); ++t) {
    const auto& edges = v.trees[t];
    const std::size_t nodes = node_union.size();
    if (edges.size() != n - 1 - t)
      return fail("T" + std::to_string(t + 1) + " has " + std::to_string(edges.size()) + " edges, expected " +
                  std::to_string(n - 1 - t));
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].left >= nodes || edges[e].right >= nodes)
        return fail(edge_label(t, e) + " references a node outside T" + std::to_string(t + 1));
      if (edges[e].left == edges[e].right) return fail(edge_label(t, e) + " is a self-loop");
    }
    if (!spans(nodes, edges)) return fail("T" + std::to_string(t + 1) + " is not a spanning tree of its nodes");

    std::vector<NodeSet> next(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& edge = edges[e];
      if (t > 0) {
        // Nodes of this tree are edges of the previous one.
        const auto& a = v.trees[t - 1][edge.left];
        const auto& b = v.trees[t - 1][edge.right];
        if (a.left != b.left && a.left != b.right && a.right != b.left && a.right != b.right)
          return fail("proximity violated: " + edge_label(t, e) + " joins edges of T" + std::to_string(t) +
                      " that share no common node");
      }
      const NodeSet& ua = node_union[edge.left];
      const NodeSet& ub = node_union[edge.right];
      const NodeSet all = set_union(ua, ub);
      const NodeSet cond = set_intersection(ua, ub);
      const NodeSet pair = set_difference(all, cond);

      NodeSet stated_cond = edge.conditioning;
      std::sort(stated_cond.begin(), stated_cond.end());
      NodeSet stated_pair{std::min(edge.conditioned.first, edge.conditioned.second),
                          std::max(edge.conditioned.first, edge.conditioned.second)};
      if (stated_pair[0] == stated_pair[1]) return fail(edge_label(t, e) + " has a degenerate conditioned pair");
      if (!set_intersection(stated_pair, stated_cond).empty())
        return fail(edge_label(t, e) + ": conditioned pair and conditioning set overlap");
      if (stated_cond.size() != t)
        return fail(edge_label(t, e) + ": conditioning set has size " + std::to_string(stated_cond.size()) +
                    ", expected " + std::to_string(t));
      if (pair != stated_pair || cond != stated_cond)
        return fail(edge_label(t, e) + ": conditioned/conditioning sets do not follow from its nodes");
      next[e] = all;
    }
    node_union = std::move(next);
  }
  return {};
}

VineStructure make_vine(std::size_t n_vars,
                        const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& node_pairs) {
  VineStructure v;
  v.n_vars = n_vars;
  std::vector<NodeSet> node_union(n_vars);
  for (std::size_t i = 0; i < n_vars; ++i) node_union[i] = {i};
  for (const auto& tree : node_pairs) {
    std::vector<VineEdge> edges;
    std::vector<NodeSet> next;
    for (auto [a, b] : tree) {
      if (a >= node_union.size() || b >= node_union.size()) throw std::invalid_argument("make_vine: node index out of range");
      const NodeSet all = set_union(node_union[a], node_union[b]);
      const NodeSet cond = set_intersection(node_union[a], node_union[b]);
      const NodeSet pair = set_difference(all, cond);
      VineEdge e{a, b, {}, cond};
      // Non-adjacent edges leave more than two conditioned elements; keep the
      // extremes so validation can report the problem.
      if (!pair.empty()) e.conditioned = {pair.front(), pair.back()};
      edges.push_back(std::move(e));
      next.push_back(all);
    }
    v.trees.push_back(std::move(edges));
    node_union = std::move(next);
  }
  return v;
}

VineStructure dvine_structure(std::size_t n_vars) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs;
  for (std::size_t t = 0; t + 1 < n_vars; ++t) {
    std::vector<std::pair<std::size_t, std::size_t>> tree;
    for (std::size_t i = 0; i + t + 1 < n_vars; ++i) tree.emplace_back(i, i + 1);
    pairs.push_back(std::move(tree));
  }
  return make_vine(n_vars, pairs);
}

VineStructure cvine_structure(std::size_t n_vars) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs;
  for (std::size_t t = 0; t + 1 < n_vars; ++t) {
    // Node 0 of each tree is the hub's edge from the previous tree.
    std::vector<std::pair<std::size_t, std::size_t>> tree;
    for (std::size_t k = 1; k + t < n_vars; ++k) tree.emplace_back(0, k);
    pairs.push_back(std::move(tree));
  }
  return make_vine(n_vars, pairs);
}

namespace {

std::vector<std::size_t> degrees(std::size_t nodes, const std::vector<VineEdge>& edges) {
  std::vector<std::size_t> deg(nodes, 0);
  for (const auto& e : edges) {
    ++deg[e.left];
    ++deg[e.right];
  }
  return deg;
}

}  // namespace

bool is_dvine(const VineStructure& v) {
  if (!validate_regular_vine(v)) return false;
  const auto deg = degrees(v.n_vars, v.trees.front());
  return *std::max_element(deg.begin(), deg.end()) <= 2;
}

bool is_cvine(const VineStructure& v) {
  if (!validate_regular_vine(v)) return false;
  for (std::size_t t = 0; t < v.trees.size(); ++t) {
    const std::size_t nodes = v.n_vars - t;
    const auto deg = degrees(nodes, v.trees[t]);
    if (std::count(deg.begin(), deg.end(), nodes - 1) < 1) return false;
  }
  return true;
}

VineStructure DVineSpec::structure() const { return dvine_structure(order.size()); }

DVineSpec build_dvine(std::vector<std::string> order, std::vector<std::vector<double>> rank_corrs) {
  const std::size_t n = order.size();
  if (n < 2) throw std::invalid_argument("build_dvine: at least 2 variables required");
  std::set<std::string> unique(order.begin(), order.end());
  if (unique.size() != n || unique.count(""))
    throw std::invalid_argument("build_dvine: order must list distinct, non-empty names");
  if (rank_corrs.size() != n - 1)
    throw std::invalid_argument("build_dvine: expected " + std::to_string(n - 1) + " correlation levels, got " +
                                std::to_string(rank_corrs.size()));

  DVineSpec spec;
  spec.order = std::move(order);
  for (std::size_t j = 0; j < rank_corrs.size(); ++j) {
    if (rank_corrs[j].size() != n - 1 - j)
      throw std::invalid_argument("build_dvine: level " + std::to_string(j + 1) + " needs " +
                                  std::to_string(n - 1 - j) + " correlations, got " +
                                  std::to_string(rank_corrs[j].size()));
    std::vector<double> sigmas;
    for (double rho : rank_corrs[j]) {
      if (!(std::fabs(rho) <= 1.0))
        throw std::invalid_argument("build_dvine: rank correlation outside [-1, 1] at level " + std::to_string(j + 1));
      sigmas.push_back(rank_to_copula_sigma(rho));
    }
    spec.edge_sigmas.push_back(std::move(sigmas));
  }
  spec.edge_rank_corrs = std::move(rank_corrs);
  return spec;
}

namespace {

// Partial correlations sigma_{ij | lo..hi} on the copula scale, computed by
// peeling the last conditioning variable off at each step.
class PartialCorrelations {
 public:
  explicit PartialCorrelations(const Eigen::MatrixXd& sigma) : sigma_(sigma) {}

  double get(std::size_t i, std::size_t j, std::size_t lo, std::size_t hi_plus_one) {
    if (i > j) std::swap(i, j);
    if (lo >= hi_plus_one) return sigma_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    const auto key = std::make_tuple(i, j, lo, hi_plus_one);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const std::size_t k = hi_plus_one - 1;
    const double ij = get(i, j, lo, k);
    const double ik = get(i, k, lo, k);
    const double jk = get(j, k, lo, k);
    const double denom = (1.0 - ik * ik) * (1.0 - jk * jk);
    if (!(denom > 1e-12))
      throw DataError("dvine_from_rank_matrix: degenerate conditioning (partial correlation of magnitude 1)");
    const double value = (ij - ik * jk) / std::sqrt(denom);
    if (!(std::fabs(value) < 1.0))
      throw DataError("dvine_from_rank_matrix: degenerate conditioning (partial correlation of magnitude 1)");
    memo_.emplace(key, value);
    return value;
  }

 private:
  const Eigen::MatrixXd& sigma_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, double> memo_;
};

}  // namespace

DVineSpec dvine_from_rank_matrix(const RankCorrelationMatrix& r, const std::vector<std::string>& order) {
  check_correlation_shape(r.entries, "dvine_from_rank_matrix");
  const std::size_t n = order.size();
  if (n != r.names.size()) throw DataError("dvine_from_rank_matrix: order must be a permutation of the matrix variables");
  std::vector<Eigen::Index> pos(n);
  std::set<std::string> seen;
  for (std::size_t k = 0; k < n; ++k) {
    auto it = std::find(r.names.begin(), r.names.end(), order[k]);
    if (it == r.names.end() || !seen.insert(order[k]).second)
      throw DataError("dvine_from_rank_matrix: order must be a permutation of the matrix variables");
    pos[k] = it - r.names.begin();
  }

  Eigen::MatrixXd sigma(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      sigma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          a == b ? 1.0 : rank_to_copula_sigma(r.entries(pos[a], pos[b]));
  if (min_eigenvalue(sigma) < -kPsdTolerance)
    throw DataError("dvine_from_rank_matrix: target is not positive semidefinite on the copula scale; "
                    "repair the matrix first");

  PartialCorrelations pc(sigma);
  std::vector<std::vector<double>> rank_corrs(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t i = 0; i + j + 1 < n; ++i)
      rank_corrs[j].push_back(copula_sigma_to_rank(pc.get(i, i + j + 1, i + 1, i + j + 1)));
  return build_dvine(order, std::move(rank_corrs));
}

Eigen::MatrixXd sample_dvine(const DVineSpec& spec, std::size_t count, const SeededRng& rng,
                             const SamplingOptions& opts) {
  if (count == 0) throw std::invalid_argument("sample_dvine: count must be positive");
  const std::size_t n = spec.dimension();
  if (n < 2 || spec.edge_sigmas.size() != n - 1) throw std::invalid_argument("sample_dvine: malformed spec");
  const auto& sig = spec.edge_sigmas;

  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(n));
  detail::parallel_rows(count, opts, [&](std::size_t begin, std::size_t end) {
    // back[i] = F(x_i | x_{i+1}, ..., x_{k-1}) while variable k is drawn;
    // fwd[m] = F(x_k | x_{k-m}, ..., x_{k-1}).
    std::vector<double> back(n), fwd(n);
    for (std::size_t r = begin; r < end; ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      const double x0 = rng.uniform(r * n);
      out(row, 0) = x0;
      back[0] = x0;
      for (std::size_t k = 1; k < n; ++k) {
        double f = rng.uniform(r * n + k);
        // Peel conditioning variables from the farthest (tree k) inwards.
        for (std::size_t m = k; m >= 1; --m) {
          f = detail::h_gauss_inv(f, back[k - m], sig[m - 1][k - m]);
          fwd[m - 1] = f;
        }
        out(row, static_cast<Eigen::Index>(k)) = f;
        if (k + 1 == n) break;
        for (std::size_t i = 0; i < k; ++i) {
          const std::size_t m = k - i;
          back[i] = detail::h_gauss(back[i], fwd[m - 1], sig[m - 1][i]);
        }
        back[k] = f;
      }
    }
  });
  return out;
}

}  // namespace scengen
