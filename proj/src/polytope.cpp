#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "body_impls.hpp"

namespace bcg::detail {

namespace {

constexpr double kMaxSubsets = 5e6;

struct Facet {
  Vec normal;
  double offset;
  std::vector<int> on;
};

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Facets of conv(pts) in R^k by brute force over k-subsets.
std::vector<Facet> enumerate_facets(const std::vector<Vec>& pts, double tol) {
  const int np = static_cast<int>(pts.size());
  const int k = static_cast<int>(pts.front().size());
  if (binomial(np, k) > kMaxSubsets) throw UnsupportedKind("too many vertices for facet enumeration");
  std::vector<Facet> facets;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  Mat m(k - 1, k);
  while (true) {
    const Vec& p0 = pts[static_cast<std::size_t>(idx[0])];
    for (int r = 1; r < k; ++r) m.row(r - 1) = (pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])] - p0).transpose();
    const Eigen::FullPivLU<Mat> lu(m);
    if (lu.rank() == k - 1) {
      Vec a = lu.kernel().col(0);
      a.normalize();
      double b = a.dot(p0);
      bool pos = false, neg = false;
      for (const auto& q : pts) {
        const double s = a.dot(q) - b;
        if (s > tol) pos = true;
        if (s < -tol) neg = true;
        if (pos && neg) break;
      }
      if (!(pos && neg) && (pos || neg)) {
        if (pos) {
          a = -a;
          b = -b;
        }
        bool dup = false;
        for (const auto& f : facets) {
          if (f.normal.dot(a) > 1.0 - 1e-9 && std::abs(f.offset - b) <= tol) {
            dup = true;
            break;
          }
        }
        if (!dup) {
          Facet f{a, b, {}};
          for (int j = 0; j < np; ++j)
            if (std::abs(a.dot(pts[static_cast<std::size_t>(j)]) - b) <= tol) f.on.push_back(j);
          facets.push_back(std::move(f));
        }
      }
    }
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == np - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return facets;
}

// Cone triangulation from the vertex mean over recursively triangulated
// facets. Each simplex is k x (k+1).
std::vector<Mat> triangulate(const std::vector<Vec>& pts, double tol, std::vector<Facet>* top = nullptr) {
  const int k = static_cast<int>(pts.front().size());
  if (k == 1) {
    double lo = pts.front()[0], hi = lo;
    for (const auto& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    if (!(hi - lo > tol)) return {};
    Mat s(1, 2);
    s << lo, hi;
    if (top) {
      Vec a(1);
      a << 1.0;
      top->push_back({a, hi, {}});
      a << -1.0;
      top->push_back({a, -lo, {}});
    }
    return {s};
  }
  if (static_cast<int>(pts.size()) < k + 1) return {};
  Vec c = Vec::Zero(k);
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());

  std::vector<Facet> facets = enumerate_facets(pts, tol);
  std::vector<Mat> out;
  for (const auto& f : facets) {
    // Orthonormal basis of the facet hyperplane.
    const Eigen::HouseholderQR<Mat> qr(f.normal);
    const Mat q = qr.householderQ();
    const Mat basis = q.rightCols(k - 1);
    const Vec& origin = pts[static_cast<std::size_t>(f.on.front())];
    std::vector<Vec> proj;
    proj.reserve(f.on.size());
    for (int j : f.on) proj.push_back(basis.transpose() * (pts[static_cast<std::size_t>(j)] - origin));
    for (const Mat& s : triangulate(proj, tol)) {
      Mat full(k, k + 1);
      for (int col = 0; col < k; ++col) full.col(col) = origin + basis * s.col(col);
      full.col(k) = c;
      out.push_back(std::move(full));
    }
  }
  if (top) *top = std::move(facets);
  return out;
}

double simplex_volume(const Mat& s) {
  const int k = static_cast<int>(s.rows());
  Mat e(k, k);
  for (int j = 0; j < k; ++j) e.col(j) = s.col(j) - s.col(k);
  return std::abs(e.determinant()) / std::tgamma(k + 1.0);
}

}  // namespace

PolytopeImpl::PolytopeImpl(Field f, int n, std::vector<Vec> vertices)
    : BodyImpl(BodyKind::VPolytope, f, n), vertices_(std::move(vertices)) {
  const int d = dim();
  if (static_cast<int>(vertices_.size()) < d + 1) throw InvalidArgument("vpolytope needs at least d + 1 vertices");
  for (const auto& v : vertices_)
    if (v.size() != d) throw DimensionMismatch("vpolytope vertex has wrong real dimension");

  Vec c = Vec::Zero(d);
  Vec lo = vertices_.front(), hi = vertices_.front();
  for (const auto& v : vertices_) {
    c += v;
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  c /= static_cast<double>(vertices_.size());
  double r = 0.0;
  for (const auto& v : vertices_) r = std::max(r, (v - c).norm());
  const double tol = 1e-9 * std::max(r, 1e-300);

  std::vector<Facet> facets;
  simplices_ = triangulate(vertices_, tol, &facets);
  if (facets.empty() || simplices_.empty()) throw InvalidArgument("vpolytope is not full-dimensional");
  normals_.resize(static_cast<Eigen::Index>(facets.size()), d);
  offsets_.resize(static_cast<Eigen::Index>(facets.size()));
  for (std::size_t i = 0; i < facets.size(); ++i) {
    normals_.row(static_cast<Eigen::Index>(i)) = facets[i].normal.transpose();
    offsets_[static_cast<Eigen::Index>(i)] = facets[i].offset + 1e-12 * r;
  }

  centroid_ = Vec::Zero(d);
  double acc = 0.0;
  for (const auto& s : simplices_) {
    const double v = simplex_volume(s);
    acc += v;
    cumulative_.push_back(acc);
    centroid_ += v * s.rowwise().mean();
  }
  volume_ = acc;
  if (!(volume_ > 0.0)) throw InvalidArgument("vpolytope has zero volume");
  centroid_ /= volume_;
  set_bounds(c, r);
  set_box(lo, hi);
}

bool PolytopeImpl::contains(std::span<const double> x) const {
  const auto rows = normals_.rows();
  const int d = dim();
  for (Eigen::Index i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += normals_(i, j) * x[static_cast<std::size_t>(j)];
    if (s > offsets_[i]) return false;
  }
  return true;
}

std::optional<double> PolytopeImpl::support(const Vec& u) const {
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices_) h = std::max(h, v.dot(u));
  return h;
}

std::optional<Interval> PolytopeImpl::chord(const Vec& base, const Vec& dir) const {
  Interval r{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  const Vec ad = normals_ * dir;
  const Vec slack = offsets_ - normals_ * base;
  for (Eigen::Index i = 0; i < ad.size(); ++i) {
    if (ad[i] > 0.0) {
      r.hi = std::min(r.hi, slack[i] / ad[i]);
    } else if (ad[i] < 0.0) {
      r.lo = std::max(r.lo, slack[i] / ad[i]);
    } else if (slack[i] < 0.0) {
      return Interval{};
    }
  }
  return r;
}

std::optional<double> PolytopeImpl::fiber_volume(const Vec& y, const Mat& N) const {
  return halfspace_fiber_volume(normals_, offsets_, y, N, N.transpose() * (bound_center() - y), bound_radius());
}

std::optional<double> halfspace_fiber_volume(const Mat& normals, const Vec& offsets, const Vec& y, const Mat& N,
                                             const Vec& a0, double radius) {
  const int p = static_cast<int>(N.cols());
  if (p > 2) return std::nullopt;
  const Mat g = normals * N;
  const Vec h = offsets - normals * y;
  if (p == 1) {
    double lo = a0[0] - radius, hi = a0[0] + radius;
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      if (g(i, 0) > 0.0) {
        hi = std::min(hi, h[i] / g(i, 0));
      } else if (g(i, 0) < 0.0) {
        lo = std::max(lo, h[i] / g(i, 0));
      } else if (h[i] < 0.0) {
        return 0.0;
      }
    }
    return std::max(0.0, hi - lo);
  }
  // Sutherland-Hodgman clipping of a square.
  std::vector<Eigen::Vector2d> poly{{a0[0] - radius, a0[1] - radius},
                                    {a0[0] + radius, a0[1] - radius},
                                    {a0[0] + radius, a0[1] + radius},
                                    {a0[0] - radius, a0[1] + radius}};
  std::vector<Eigen::Vector2d> next;
  for (Eigen::Index i = 0; i < g.rows() && !poly.empty(); ++i) {
    const Eigen::Vector2d gi(g(i, 0), g(i, 1));
    next.clear();
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Eigen::Vector2d& P = poly[k];
      const Eigen::Vector2d& Q = poly[(k + 1) % poly.size()];
      const double sp = gi.dot(P) - h[i], sq = gi.dot(Q) - h[i];
      if (sp <= 0.0) next.push_back(P);
      if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) next.push_back(P + sp / (sp - sq) * (Q - P));
    }
    poly.swap(next);
  }
  double area = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Eigen::Vector2d& P = poly[k];
    const Eigen::Vector2d& Q = poly[(k + 1) % poly.size()];
    area += P.x() * Q.y() - P.y() * Q.x();
  }
  return 0.5 * std::abs(area);
}

void PolytopeImpl::sample(Rng& rng, std::span<double> out) const {
  const double t = uniform01(rng) * volume_;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), t);
  if (it == cumulative_.end()) --it;
  const Mat& s = simplices_[static_cast<std::size_t>(it - cumulative_.begin())];
  const int d = dim();
  std::exponential_distribution<double> ex(1.0);
  double w[kMaxDim + 1];
  double total = 0.0;
  for (int j = 0; j <= d; ++j) {
    w[j] = ex(rng);
    total += w[j];
  }
  for (int i = 0; i < d; ++i) {
    double v = 0.0;
    for (int j = 0; j <= d; ++j) v += s(i, j) * w[j];
    out[static_cast<std::size_t>(i)] = v / total;
  }
}

}  // namespace bcg::detail
