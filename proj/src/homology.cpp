#include "tsdyn/homology.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <deque>

#include "tsdyn/errors.hpp"

namespace tsdyn {

std::vector<int64_t> HomologyBasis::half_edge_class(int h) const {
  std::vector<int64_t> out = edge_coordinates.row(FlatTriangulation::edge_of(h));
  if (h & 1)
    for (auto& x : out) x = -x;
  return out;
}

std::vector<int64_t> chain_boundary(const FlatTriangulation& tri, const std::vector<int64_t>& chain) {
  std::vector<int64_t> b(tri.num_vertices(), 0);
  for (int e = 0; e < tri.num_edges(); ++e) {
    if (!chain[e]) continue;
    b[tri.origin(2 * e + 1)] += chain[e];
    b[tri.origin(2 * e)] -= chain[e];
  }
  return b;
}

HomologyBasis compute_homology_basis(const FlatTriangulation& tri) {
  const int ne = tri.num_edges(), nf = tri.num_faces(), nv = tri.num_vertices();
  const int euler = nv - ne + nf;
  if (euler > 2 || euler % 2 != 0) throw Error(ErrorCode::kInternal, "triangulation has odd Euler characteristic");
  const int genus = (2 - euler) / 2;

  // Spanning tree of the dual graph, breadth-first from face 0.
  std::vector<int> parent_edge(nf, -1), order;
  std::vector<char> visited(nf, 0), tree_edge(ne, 0);
  std::deque<int> queue{0};
  visited[0] = 1;
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop_front();
    order.push_back(f);
    for (int h : tri.face_half_edges(f)) {
      const int g = tri.face(FlatTriangulation::twin(h));
      if (visited[g]) continue;
      visited[g] = 1;
      parent_edge[g] = FlatTriangulation::edge_of(h);
      tree_edge[parent_edge[g]] = 1;
      queue.push_back(g);
    }
  }
  if (static_cast<int>(order.size()) != nf) throw Error(ErrorCode::kDisconnected, "triangulation is disconnected");

  std::vector<int> cotree_index(ne, -1);
  int k = 0;
  for (int e = 0; e < ne; ++e)
    if (!tree_edge[e]) cotree_index[e] = k++;
  if (k != 2 * genus + nv - 1) throw Error(ErrorCode::kInternal, "cotree size disagrees with Euler characteristic");

  // Class of every edge in the cotree basis, peeling faces leaves-first.
  IntMatrix r(ne, k);
  for (int e = 0; e < ne; ++e)
    if (cotree_index[e] >= 0) r(e, cotree_index[e]) = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int f = *it;
    if (parent_edge[f] < 0) continue;
    int hp = -1;
    std::vector<int> others;
    for (int h : tri.face_half_edges(f)) {
      if (FlatTriangulation::edge_of(h) == parent_edge[f])
        hp = h;
      else
        others.push_back(h);
    }
    const int sp = FlatTriangulation::sign_of(hp);
    for (int c = 0; c < k; ++c) {
      int64_t acc = 0;
      for (int h : others) acc = checked_add(acc, FlatTriangulation::sign_of(h) * r(FlatTriangulation::edge_of(h), c));
      r(parent_edge[f], c) = -sp * acc;
    }
  }

  IntMatrix d(nv, k);
  for (int e = 0; e < ne; ++e) {
    if (cotree_index[e] < 0) continue;
    d(tri.origin(2 * e + 1), cotree_index[e]) += 1;
    d(tri.origin(2 * e), cotree_index[e]) -= 1;
  }
  const IntMatrix kern = integer_kernel(d);
  if (kern.rows() != 2 * genus) throw Error(ErrorCode::kInternal, "absolute homology has unexpected rank");

  HomologyBasis basis;
  basis.genus = genus;
  basis.num_cone_points = nv;
  basis.fingerprint = tri.fingerprint();

  IntMatrix abs_rows(0, k);
  if (genus > 0) {
    // Twice the cup product on cotree coordinates, face by face.
    Eigen::MatrixXd w2 = Eigen::MatrixXd::Zero(k, k);
    for (int f = 0; f < nf; ++f) {
      const auto& fh = tri.face_half_edges(f);
      const int s = FlatTriangulation::sign_of(fh[0]) * FlatTriangulation::sign_of(fh[1]);
      const int e0 = FlatTriangulation::edge_of(fh[0]), e1 = FlatTriangulation::edge_of(fh[1]);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          w2(i, j) += s * (static_cast<double>(r(e0, i)) * r(e1, j) - static_cast<double>(r(e1, i)) * r(e0, j));
    }
    Eigen::MatrixXd kd(2 * genus, k);
    for (int i = 0; i < 2 * genus; ++i)
      for (int j = 0; j < k; ++j) kd(i, j) = static_cast<double>(kern(i, j));
    const Eigen::MatrixXd right_inv = kd.transpose() * (kd * kd.transpose()).inverse();
    const Eigen::MatrixXd cup = 0.5 * right_inv.transpose() * w2 * right_inv;
    IntMatrix cup_int(2 * genus, 2 * genus);
    for (int i = 0; i < 2 * genus; ++i)
      for (int j = 0; j < 2 * genus; ++j) {
        const double v = std::round(cup(i, j));
        if (std::abs(cup(i, j) - v) > 1e-6) throw Error(ErrorCode::kInternal, "cup product is not integral");
        cup_int(i, j) = static_cast<int64_t>(v);
      }
    const IntMatrix inter = unimodular_inverse(cup_int).transpose();
    const IntMatrix p = symplectic_reduction(inter);
    abs_rows = p * kern;
    basis.intersection_matrix = p * inter * p.transpose();
    if (!(basis.intersection_matrix == standard_symplectic(genus)))
      throw Error(ErrorCode::kInternal, "symplectic reduction failed");
  } else {
    basis.intersection_matrix = IntMatrix(0, 0);
  }

  // Relative completion: breadth-first edge paths from vertex 0.
  std::vector<std::vector<int64_t>> path_to(nv);
  path_to[0].assign(k, 0);
  std::deque<int> vq{0};
  std::vector<int> out_edge(nv, -1);
  {
    std::vector<std::vector<int>> outgoing(nv);
    for (int h = 0; h < tri.num_half_edges(); ++h) outgoing[tri.origin(h)].push_back(h);
    while (!vq.empty()) {
      const int v = vq.front();
      vq.pop_front();
      for (int h : outgoing[v]) {
        const int w = tri.origin(FlatTriangulation::twin(h));
        if (!path_to[w].empty()) continue;
        path_to[w] = path_to[v];
        const int s = FlatTriangulation::sign_of(h), e = FlatTriangulation::edge_of(h);
        for (int c = 0; c < k; ++c) path_to[w][c] = checked_add(path_to[w][c], s * r(e, c));
        vq.push_back(w);
      }
    }
  }

  IntMatrix q(k, k);
  for (int i = 0; i < 2 * genus; ++i)
    for (int c = 0; c < k; ++c) q(i, c) = abs_rows(i, c);
  for (int v = 1; v < nv; ++v)
    for (int c = 0; c < k; ++c) q(2 * genus + v - 1, c) = path_to[v][c];
  basis.edge_coordinates = r * unimodular_inverse(q);

  basis.relative_cycles.assign(k, std::vector<int64_t>(ne, 0));
  for (int i = 0; i < k; ++i)
    for (int e = 0; e < ne; ++e)
      if (cotree_index[e] >= 0) basis.relative_cycles[i][e] = q(i, cotree_index[e]);
  return basis;
}

int64_t intersection_number(const HomologyBasis& basis, const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
  const int n = basis.absolute_rank();
  int64_t s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (basis.intersection_matrix(i, j)) s = checked_add(s, checked_mul(checked_mul(a[i], basis.intersection_matrix(i, j)), b[j]));
  return s;
}

double wedge(const HomologyBasis& basis, const std::vector<double>& a, const std::vector<double>& b) {
  // With an intersection matrix equal to J the cup form in the dual basis is J as well.
  double s = 0.0;
  for (int i = 0; i < basis.genus; ++i) s += a[2 * i] * b[2 * i + 1] - a[2 * i + 1] * b[2 * i];
  return s;
}

}  // namespace tsdyn
