#include "hyperperiods/homology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hyperperiods/error.hpp"
#include "hyperperiods/quadrature.hpp"

namespace hyperperiods {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out))
        throw Error("homology.Overflow", "integer overflow in symplectic reduction");
    return out;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_sub_overflow(a, b, &out))
        throw Error("homology.Overflow", "integer overflow in symplectic reduction");
    return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out))
        throw Error("homology.Overflow", "integer overflow in symplectic reduction");
    return out;
}

double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }

int orientation(Complex a, Complex b, Complex c, double tol) {
    const double v = cross(b - a, c - a);
    if (v > tol) return 1;
    if (v < -tol) return -1;
    return 0;
}

bool on_segment(Complex a, Complex b, Complex p, double tol) {
    return std::min(a.real(), b.real()) - tol <= p.real() &&
           p.real() <= std::max(a.real(), b.real()) + tol &&
           std::min(a.imag(), b.imag()) - tol <= p.imag() &&
           p.imag() <= std::max(a.imag(), b.imag()) + tol;
}

// Closed segments [a, b] and [c, d] meet (including touching).
bool segments_meet(Complex a, Complex b, Complex c, Complex d, double tol) {
    const double area_tol = tol * tol;
    const int o1 = orientation(a, b, c, area_tol), o2 = orientation(a, b, d, area_tol);
    const int o3 = orientation(c, d, a, area_tol), o4 = orientation(c, d, b, area_tol);
    if (o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0 && (o1 != 0 || o2 != 0)) return true;
    if (o1 == 0 && on_segment(a, b, c, tol)) return true;
    if (o2 == 0 && on_segment(a, b, d, tol)) return true;
    if (o3 == 0 && on_segment(c, d, a, tol)) return true;
    if (o4 == 0 && on_segment(c, d, b, tol)) return true;
    return false;
}

struct PathScore {
    int crossings = 0;
    double min_parameter = std::numeric_limits<double>::infinity();
    std::size_t chord = 0;
    std::size_t foreign = 0;
    std::pair<std::size_t, std::size_t> crossing_pair{0, 0};

    bool better_than(const PathScore& other) const {
        if (crossings != other.crossings) return crossings < other.crossings;
        return min_parameter > other.min_parameter * (1.0 + 1e-12);
    }
};

PathScore score_order(std::span<const Complex> pts, const std::vector<std::size_t>& order,
                      double tol) {
    PathScore s;
    const std::size_t nseg = order.size() - 1;
    for (std::size_t k = 0; k < nseg; ++k) {
        const Complex a = pts[order[k]], b = pts[order[k + 1]];
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == order[k] || i == order[k + 1]) continue;
            const double rho = chord_ellipse_parameter(a, b, pts[i]);
            if (rho < s.min_parameter) {
                s.min_parameter = rho;
                s.chord = k;
                s.foreign = i;
            }
        }
    }
    for (std::size_t k = 0; k < nseg; ++k) {
        for (std::size_t l = k + 2; l < nseg; ++l) {
            if (segments_meet(pts[order[k]], pts[order[k + 1]], pts[order[l]], pts[order[l + 1]],
                              tol)) {
                if (s.crossings == 0) s.crossing_pair = {k, l};
                ++s.crossings;
            }
        }
    }
    return s;
}

std::vector<std::size_t> initial_order(std::span<const Complex> pts, double diameter) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    // Direction of the diameter, oriented from the lexicographically smaller end.
    std::size_t di = 0, dj = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(pts[i] - pts[j]) > best) {
                best = std::abs(pts[i] - pts[j]);
                di = i;
                dj = j;
            }
    const auto lex_less = [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    };
    if (lex_less(pts[dj], pts[di])) std::swap(di, dj);
    const Complex dir = (pts[dj] - pts[di]) / std::abs(pts[dj] - pts[di]);

    bool collinear = true;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(cross(dir, pts[i] - pts[di])) > 1e-12 * diameter) collinear = false;
    if (collinear) {
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
            return ((pts[a] - pts[di]) * std::conj(dir)).real() <
                   ((pts[b] - pts[di]) * std::conj(dir)).real();
        });
        return order;
    }

    Complex centroid(0.0);
    for (const auto& p : pts) centroid += p;
    centroid /= static_cast<double>(n);
    std::vector<double> angle(n), radius(n);
    for (std::size_t i = 0; i < n; ++i) {
        angle[i] = std::arg(pts[i] - centroid);
        radius[i] = std::abs(pts[i] - centroid);
    }
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        if (angle[a] != angle[b]) return angle[a] < angle[b];
        return radius[a] < radius[b];
    });
    // Open the ring at its longest edge.
    std::size_t cut = 0;
    double longest = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double len = std::abs(pts[order[(k + 1) % n]] - pts[order[k]]);
        if (len > longest) {
            longest = len;
            cut = k;
        }
    }
    std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>((cut + 1) % n),
                order.end());
    return order;
}

std::string describe_point(std::size_t i, Complex z) {
    std::ostringstream os;
    os.precision(10);
    os << i << " (" << z.real() << ", " << z.imag() << ")";
    return os.str();
}

int unit_sign(Complex ratio, const std::string& what) {
    if (std::abs(ratio - 1.0) < 1e-6) return 1;
    if (std::abs(ratio + 1.0) < 1e-6) return -1;
    std::ostringstream os;
    os.precision(17);
    os << "sheet comparison on " << what << " gave ratio (" << ratio.real() << ", "
       << ratio.imag() << ") instead of +-1";
    throw Error("homology.SheetMismatch", os.str());
}

}  // namespace

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::standard_symplectic(std::size_t g) {
    IntMatrix m(2 * g, 2 * g);
    for (std::size_t i = 0; i < g; ++i) {
        m(i, g + i) = 1;
        m(g + i, i) = -1;
    }
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw Error("homology.ShapeMismatch", "matrix product shapes differ");
    IntMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const std::int64_t a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out(i, j) = checked_add(out(i, j), checked_mul(a, rhs(k, j)));
        }
    return out;
}

IntMatrix IntMatrix::operator-() const {
    IntMatrix out(*this);
    for (auto& v : out.data_) v = -v;
    return out;
}

bool IntMatrix::is_antisymmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j) != -(*this)(j, i)) return false;
    return true;
}

__extension__ using Wide = __int128;

std::int64_t IntMatrix::determinant() const {
    if (rows_ != cols_) throw Error("homology.ShapeMismatch", "determinant of a non-square matrix");
    const std::size_t n = rows_;
    if (n == 0) return 1;
    std::vector<Wide> a(data_.begin(), data_.end());
    auto at = [&](std::size_t i, std::size_t j) -> Wide& { return a[i * n + j]; };
    Wide prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && at(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
        prev = at(k, k);
    }
    const Wide det = sign * at(n - 1, n - 1);
    if (det > std::numeric_limits<std::int64_t>::max() ||
        det < std::numeric_limits<std::int64_t>::min())
        throw Error("homology.Overflow", "determinant exceeds 64 bits");
    return static_cast<std::int64_t>(det);
}

double clearance_ellipse_parameter(double clearance) {
    return 2.0 * clearance + std::sqrt(4.0 * clearance * clearance + 1.0);
}

double chord_ellipse_parameter(Complex a, Complex b, Complex point) {
    const Complex t = (point - 0.5 * (a + b)) / (0.5 * (b - a));
    const Complex s = std::sqrt(t * t - 1.0);
    return std::max(std::abs(t + s), std::abs(t - s));
}

SpanningPath spanning_path(const BranchPointSet& branch, const HomologyOptions& options) {
    const auto pts = branch.points();
    const std::size_t n = pts.size();
    if (n < 2) throw Error("homology.NoClearPath", "need at least two branch points");
    if (!(options.clearance > 0.0))
        throw Error("homology.InvalidClearance", "clearance must be positive");
    const double threshold = clearance_ellipse_parameter(options.clearance);
    const double tol = 1e-12 * branch.diameter();

    auto order = initial_order(pts, branch.diameter());
    auto score = score_order(pts, order, tol);
    const auto valid = [&](const PathScore& s) {
        return s.crossings == 0 && s.min_parameter >= threshold;
    };

    // Local improvement by adjacent swaps and re-opening the ring elsewhere.
    const std::size_t max_steps = 8 * n * n;
    for (std::size_t step = 0; step < max_steps && !valid(score); ++step) {
        std::vector<std::size_t> best_order;
        PathScore best = score;
        const auto consider = [&](std::vector<std::size_t> cand) {
            auto s = score_order(pts, cand, tol);
            if (s.better_than(best)) {
                best = s;
                best_order = std::move(cand);
            }
        };
        for (std::size_t k = 0; k + 1 < n; ++k) {
            auto cand = order;
            std::swap(cand[k], cand[k + 1]);
            consider(std::move(cand));
        }
        for (std::size_t k = 1; k < n; ++k) {
            auto cand = order;
            std::rotate(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
            consider(std::move(cand));
        }
        if (best_order.empty()) break;
        order = std::move(best_order);
        score = best;
    }

    if (!valid(score)) {
        if (score.crossings > 0) {
            const auto [k, l] = score.crossing_pair;
            throw Error("homology.NoClearPath",
                        "chords " + describe_point(order[k], pts[order[k]]) + " -> " +
                            describe_point(order[k + 1], pts[order[k + 1]]) + " and " +
                            describe_point(order[l], pts[order[l]]) + " -> " +
                            describe_point(order[l + 1], pts[order[l + 1]]) + " cross");
        }
        std::ostringstream os;
        os << "no ordering keeps every foreign point clear of the chords; worst triple: chord "
           << describe_point(order[score.chord], pts[order[score.chord]]) << " -> "
           << describe_point(order[score.chord + 1], pts[order[score.chord + 1]])
           << " with point " << describe_point(score.foreign, pts[score.foreign])
           << " (ellipse parameter " << score.min_parameter << " < " << threshold << ")";
        throw Error("homology.NoClearPath", os.str());
    }

    SpanningPath path;
    path.order = std::move(order);
    for (std::size_t k = 0; k + 1 < n; ++k) path.segments.emplace_back(path.order[k], path.order[k + 1]);
    path.min_ellipse_parameter = score.min_parameter;
    return path;
}

CycleSet build_cycles(const HyperellipticCurve& curve, const SpanningPath& path) {
    const int g = curve.genus();
    const auto pts = curve.branch().points();
    if (path.segments.size() != static_cast<std::size_t>(2 * g + 1))
        throw Error("homology.InvalidPath", "spanning path has the wrong number of segments");

    std::vector<std::pair<Complex, Complex>> cuts;
    for (int k = 0; k <= g; ++k) {
        const auto [i, j] = path.segments[static_cast<std::size_t>(2 * k)];
        cuts.emplace_back(pts[i], pts[j]);
    }
    // Branch of y analytic off the cuts: the product of the cut factors.
    const auto branch_off_cuts = [&](Complex x, int skip) {
        Complex y(1.0);
        for (int c = 0; c <= g; ++c)
            if (c != skip) y *= chord_factor(cuts[c].first, cuts[c].second, x);
        return y;
    };

    CycleSet set;
    set.genus = g;
    set.path = path;
    for (int k = 0; k <= g; ++k) {
        const std::size_t s = static_cast<std::size_t>(2 * k);
        const auto [i, j] = path.segments[s];
        const Complex mid = 0.5 * (pts[i] + pts[j]);
        const Complex half = 0.5 * (pts[j] - pts[i]);
        // Boundary value from the left of i -> j, relative to the chord branch.
        const Complex left = Complex(0.0, 1.0) * half * branch_off_cuts(mid, k);
        const int eps = unit_sign(left / segment_reference_y(curve, i, j),
                                  "cut " + std::to_string(k));
        Cycle c;
        c.kind = CycleKind::Pair;
        c.index = k;
        c.label = "pair-" + std::to_string(k);
        // Counterclockwise: right bank forward, left bank back.
        c.traversals = {{s, 1, -eps}, {s, -1, eps}};
        set.cycles.push_back(std::move(c));
    }
    for (int k = 1; k <= g; ++k) {
        const std::size_t s = static_cast<std::size_t>(2 * k - 1);
        const auto [i, j] = path.segments[s];
        const Complex mid = 0.5 * (pts[i] + pts[j]);
        const int sigma = unit_sign(branch_off_cuts(mid, -1) / segment_reference_y(curve, i, j),
                                    "cross segment " + std::to_string(k));
        Cycle c;
        c.kind = CycleKind::Cross;
        c.index = k;
        c.label = "cross-" + std::to_string(k);
        c.traversals = {{s, 1, sigma}, {s, -1, -sigma}};
        set.cycles.push_back(std::move(c));
    }
    set.intersection = intersection_matrix(set);
    return set;
}

IntMatrix intersection_matrix(const CycleSet& set) {
    const std::size_t n = set.cycles.size();
    IntMatrix M(n, n);
    const auto& segs = set.path.segments;
    for (std::size_t u = 0; u < n; ++u) {
        const Cycle& pair = set.cycles[u];
        if (pair.kind != CycleKind::Pair) continue;
        const auto cut = segs[pair.traversals.front().segment];
        for (std::size_t v = 0; v < n; ++v) {
            const Cycle& crossc = set.cycles[v];
            if (crossc.kind != CycleKind::Cross) continue;
            const auto& first = crossc.traversals.front();
            auto [start, end] = segs[first.segment];
            if (first.direction < 0) std::swap(start, end);
            // A cross loop meets the pair loop of a cut it shares an endpoint
            // with, once on the common sheet.
            std::int64_t value = 0;
            if (end == cut.first || end == cut.second) value = 1;
            else if (start == cut.first || start == cut.second) value = -1;
            M(u, v) = value;
            M(v, u) = -value;
        }
    }
    return M;
}

bool is_closed(const Cycle& cycle, const SpanningPath& path) {
    const auto& t = cycle.traversals;
    if (t.empty()) return false;
    int product = 1;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto& cur = t[k];
        const auto& next = t[(k + 1) % t.size()];
        if (cur.segment >= path.segments.size() || next.segment >= path.segments.size()) return false;
        const auto [a, b] = path.segments[cur.segment];
        const auto [c, d] = path.segments[next.segment];
        const std::size_t cur_end = cur.direction > 0 ? b : a;
        const std::size_t next_start = next.direction > 0 ? c : d;
        if (cur_end != next_start) return false;
        // Turning around a simple branch point exchanges the sheets.
        if (next.sheet != -cur.sheet) return false;
        product *= -1;
    }
    return product == 1;
}

SymplecticTransform symplectic_reduce(const IntMatrix& M) {
    if (M.rows() != M.cols())
        throw Error("homology.ShapeMismatch", "intersection matrix must be square");
    if (!M.is_antisymmetric())
        throw Error("homology.NotAntisymmetric", "matrix is not square antisymmetric");
    const std::size_t n = M.rows();
    if (n % 2 != 0 || std::llabs(M.determinant()) != 1)
        throw Error("homology.NotUnimodular", "intersection matrix is not unimodular");
    const std::size_t g = n / 2;

    using Vec = std::vector<std::int64_t>;
    const auto pairing = [&](const Vec& u, const Vec& v) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (u[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (v[j] != 0 && M(i, j) != 0) s = checked_add(s, checked_mul(checked_mul(u[i], M(i, j)), v[j]));
        }
        return s;
    };
    const auto axpy = [&](Vec& y, std::int64_t a, const Vec& x) {
        for (std::size_t i = 0; i < n; ++i) y[i] = checked_add(y[i], checked_mul(a, x[i]));
    };

    std::vector<Vec> remaining;
    for (std::size_t i = 0; i < n; ++i) {
        Vec v(n, 0);
        v[i] = 1;
        remaining.push_back(std::move(v));
    }
    std::vector<Vec> alphas, betas;
    while (!remaining.empty()) {
        Vec e = remaining.front();
        std::vector<Vec> rest(remaining.begin() + 1, remaining.end());
        std::vector<std::int64_t> a(rest.size());
        for (std::size_t i = 0; i < rest.size(); ++i) a[i] = pairing(e, rest[i]);

        // Euclid on the pairings until a single nonzero entry remains.
        std::size_t p = 0;
        for (;;) {
            std::size_t nonzero = 0;
            p = rest.size();
            for (std::size_t i = 0; i < rest.size(); ++i) {
                if (a[i] == 0) continue;
                ++nonzero;
                if (p == rest.size() || std::llabs(a[i]) < std::llabs(a[p])) p = i;
            }
            if (nonzero == 0)
                throw Error("homology.NotUnimodular", "degenerate vector in symplectic reduction");
            if (nonzero == 1) break;
            for (std::size_t i = 0; i < rest.size(); ++i) {
                if (i == p || a[i] == 0) continue;
                const std::int64_t q = a[i] / a[p];
                axpy(rest[i], -q, rest[p]);
                a[i] = checked_sub(a[i], checked_mul(q, a[p]));
            }
        }
        if (std::llabs(a[p]) != 1)
            throw Error("homology.NotUnimodular", "pairing gcd is not 1");
        Vec f = rest[p];
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(p));
        Vec alpha = e, beta = f;
        if (a[p] == -1) std::swap(alpha, beta);

        for (auto& v : rest) {
            const std::int64_t vb = pairing(v, beta);
            const std::int64_t va = pairing(v, alpha);
            axpy(v, -vb, alpha);
            axpy(v, va, beta);
        }
        alphas.push_back(std::move(alpha));
        betas.push_back(std::move(beta));
        remaining = std::move(rest);
    }

    SymplecticTransform out{IntMatrix(n, n)};
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            out.T(i, j) = alphas[i][j];
            out.T(g + i, j) = betas[i][j];
        }
    return out;
}

CanonicalBasis canonical_basis(const HyperellipticCurve& curve, const HomologyOptions& options) {
    CanonicalBasis basis;
    const auto path = spanning_path(curve.branch(), options);
    basis.cycles = build_cycles(curve, path);
    const int g = curve.genus();
    for (int k = 1; k <= g; ++k) basis.generators.push_back(basis.cycles.pair_index(k));
    for (int k = 1; k <= g; ++k) basis.generators.push_back(basis.cycles.cross_index(k));

    const std::size_t n = basis.generators.size();
    IntMatrix sub(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            sub(i, j) = basis.cycles.intersection(basis.generators[i], basis.generators[j]);
    basis.transform = symplectic_reduce(sub);
    basis.basis_intersection = basis.transform.T * sub * basis.transform.T.transpose();

    const std::size_t total = basis.cycles.cycles.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::int64_t> row(total, 0);
        for (std::size_t j = 0; j < n; ++j) row[basis.generators[j]] = basis.transform.T(i, j);
        basis.combinations.push_back(std::move(row));
    }
    return basis;
}

}  // namespace hyperperiods
