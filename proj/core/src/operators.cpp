#include "meissner/operators.hpp"

#include <algorithm>
#include <cmath>

namespace meissner {

namespace {

struct Accessor {
    const StaggeredGrid* g;
    std::array<int, 3> shape;

    std::size_t idx(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * shape[1] + j) * shape[2] + k;
    }
    std::size_t idx(const std::array<int, 3>& c) const { return idx(c[0], c[1], c[2]); }
};

// Value at `c` shifted by `off` along `axis`, if that storage point exists
// (wraps on periodic axes, drops beyond walls -- the transpose behaviour of
// the primal operators).
bool sample(const Accessor& acc, const std::vector<double>& v, std::array<int, 3> c, int axis,
            int off, double& out) {
    c[axis] += off;
    if (!acc.g->wrap(axis, acc.shape[axis], c[axis])) return false;
    out = v[acc.idx(c)];
    return true;
}

template <typename F>
void for_each(const std::array<int, 3>& s, F&& body) {
    for (int i = 0; i < s[0]; ++i)
        for (int j = 0; j < s[1]; ++j)
            for (int k = 0; k < s[2]; ++k) body(i, j, k);
}

int cyc(int a, int off) { return (a + off) % 3; }

}  // namespace

VectorField grad(const ScalarField& u) {
    require(u.placement() == Placement::Node, ErrorKind::PlacementMismatch, "grad needs NODE");
    const auto& g = u.grid();
    VectorField out(g, Placement::Edge);
    Accessor un{&g, u.shape()};
    for (int d = 0; d < out.n_comps(); ++d) {
        Accessor ed{&g, out.shape(d)};
        double inv_h = 1.0 / g.spacing(d);
        for_each(out.shape(d), [&](int i, int j, int k) {
            double hi = 0.0, lo = 0.0;
            sample(un, u.values(), {i, j, k}, d, 1, hi);
            sample(un, u.values(), {i, j, k}, d, 0, lo);
            out.comp(d)[ed.idx(i, j, k)] = (hi - lo) * inv_h;
        });
    }
    return out;
}

VectorField curl(const VectorField& e) {
    require(e.placement() == Placement::Edge, ErrorKind::PlacementMismatch, "curl needs EDGE");
    const auto& g = e.grid();
    require(g.dims() == 3, ErrorKind::PlacementMismatch, "curl is three-dimensional");
    VectorField out(g, Placement::Face);
    for (int d = 0; d < 3; ++d) {
        int a = cyc(d, 1), b = cyc(d, 2);
        Accessor fd{&g, out.shape(d)};
        Accessor eb{&g, e.shape(b)};
        Accessor ea{&g, e.shape(a)};
        double inv_ha = 1.0 / g.spacing(a), inv_hb = 1.0 / g.spacing(b);
        for_each(out.shape(d), [&](int i, int j, int k) {
            // (curl E)_d = d_a E_b - d_b E_a; forward differences across the
            // face, both end edges always exist.
            double b_hi = 0.0, b_lo = 0.0, a_hi = 0.0, a_lo = 0.0;
            sample(eb, e.comp(b), {i, j, k}, a, 1, b_hi);
            sample(eb, e.comp(b), {i, j, k}, a, 0, b_lo);
            sample(ea, e.comp(a), {i, j, k}, b, 1, a_hi);
            sample(ea, e.comp(a), {i, j, k}, b, 0, a_lo);
            out.comp(d)[fd.idx(i, j, k)] = (b_hi - b_lo) * inv_ha - (a_hi - a_lo) * inv_hb;
        });
    }
    return out;
}

ScalarField divergence(const VectorField& f) {
    require(f.placement() == Placement::Face, ErrorKind::PlacementMismatch, "div needs FACE");
    const auto& g = f.grid();
    ScalarField out(g, Placement::Cell);
    Accessor cc{&g, out.shape()};
    for (int d = 0; d < f.n_comps(); ++d) {
        Accessor fd{&g, f.shape(d)};
        double inv_h = 1.0 / g.spacing(d);
        for_each(out.shape(), [&](int i, int j, int k) {
            double hi = 0.0, lo = 0.0;
            sample(fd, f.comp(d), {i, j, k}, d, 1, hi);
            sample(fd, f.comp(d), {i, j, k}, d, 0, lo);
            out.values()[cc.idx(i, j, k)] += (hi - lo) * inv_h;
        });
    }
    return out;
}

VectorField curl_dual(const VectorField& f) {
    require(f.placement() == Placement::Face, ErrorKind::PlacementMismatch, "curl_dual needs FACE");
    const auto& g = f.grid();
    require(g.dims() == 3, ErrorKind::PlacementMismatch, "curl_dual is three-dimensional");
    VectorField out(g, Placement::Edge);
    for (int c = 0; c < 3; ++c) {
        int a = cyc(c, 1), b = cyc(c, 2);
        Accessor ec{&g, out.shape(c)};
        Accessor fb{&g, f.shape(b)};
        Accessor fa{&g, f.shape(a)};
        double inv_ha = 1.0 / g.spacing(a), inv_hb = 1.0 / g.spacing(b);
        for_each(out.shape(c), [&](int i, int j, int k) {
            // (curl X)_c = d_a X_b - d_b X_a; backward differences, faces
            // beyond a wall contribute nothing.  This is the exact transpose
            // of the primal curl under the uniform cell-volume pairing.
            double v = 0.0, s = 0.0;
            if (sample(fb, f.comp(b), {i, j, k}, a, 0, s)) v += s * inv_ha;
            if (sample(fb, f.comp(b), {i, j, k}, a, -1, s)) v -= s * inv_ha;
            if (sample(fa, f.comp(a), {i, j, k}, b, 0, s)) v -= s * inv_hb;
            if (sample(fa, f.comp(a), {i, j, k}, b, -1, s)) v += s * inv_hb;
            out.comp(c)[ec.idx(i, j, k)] = v;
        });
    }
    return out;
}

ScalarField div_dual(const VectorField& e) {
    require(e.placement() == Placement::Edge, ErrorKind::PlacementMismatch, "div_dual needs EDGE");
    const auto& g = e.grid();
    ScalarField out(g, Placement::Node);
    Accessor nn{&g, out.shape()};
    for (int d = 0; d < e.n_comps(); ++d) {
        Accessor ed{&g, e.shape(d)};
        double inv_h = 1.0 / g.spacing(d);
        for_each(out.shape(), [&](int i, int j, int k) {
            double v = 0.0, s = 0.0;
            if (sample(ed, e.comp(d), {i, j, k}, d, 0, s)) v += s * inv_h;
            if (sample(ed, e.comp(d), {i, j, k}, d, -1, s)) v -= s * inv_h;
            out.values()[nn.idx(i, j, k)] += v;
        });
    }
    return out;
}

VectorField grad_dual(const ScalarField& p) {
    require(p.placement() == Placement::Cell, ErrorKind::PlacementMismatch, "grad_dual needs CELL");
    const auto& g = p.grid();
    VectorField out(g, Placement::Face);
    Accessor pc{&g, p.shape()};
    for (int d = 0; d < out.n_comps(); ++d) {
        Accessor fd{&g, out.shape(d)};
        double inv_h = 1.0 / g.spacing(d);
        for_each(out.shape(d), [&](int i, int j, int k) {
            // cells beyond a wall act as zero ghosts: p = 0 Dirichlet there
            double v = 0.0, s = 0.0;
            if (sample(pc, p.values(), {i, j, k}, d, 0, s)) v += s * inv_h;
            if (sample(pc, p.values(), {i, j, k}, d, -1, s)) v -= s * inv_h;
            out.comp(d)[fd.idx(i, j, k)] = v;
        });
    }
    return out;
}

VectorField apply_diff_to_scalar(DiffKind kind, const ScalarField& u) {
    require(kind == DiffKind::Grad, ErrorKind::PlacementMismatch, "scalar input admits GRAD only");
    return grad(u);
}

VectorField apply_diff_vector(DiffKind kind, const VectorField& v) {
    require(kind == DiffKind::Curl, ErrorKind::PlacementMismatch, "vector-to-vector diff is CURL");
    return curl(v);
}

double quad_weight(const StaggeredGrid& g, const std::array<int, 3>& shape, Placement p, int comp,
                   int i, int j, int k) {
    std::array<int, 3> c{i, j, k};
    double w = 1.0;
    for (int a = 0; a < 3; ++a) {
        bool node_aligned;
        switch (p) {
            case Placement::Node: node_aligned = true; break;
            case Placement::Cell: node_aligned = false; break;
            case Placement::Edge: node_aligned = (a != comp); break;
            default: node_aligned = (a == comp); break;  // Face
        }
        double ha = g.spacing(a);
        if (node_aligned && g.wall(a) && (c[a] == 0 || c[a] == shape[a] - 1))
            w *= 0.5 * ha;
        else
            w *= ha;
    }
    return w;
}

double integrate(const ScalarField& u) {
    const auto& g = u.grid();
    double sum = 0.0;
    for_each(u.shape(), [&](int i, int j, int k) {
        sum += quad_weight(g, u.shape(), u.placement(), -1, i, j, k) * u.at(i, j, k);
    });
    return sum;
}

namespace {

struct DiffArray {
    std::array<int, 3> shape;
    std::vector<double> values;
};

// Adjacent-pair difference quotients along `axis`; wraps on periodic axes,
// stops at walls.  Used for the H1/H2 seminorm approximations.
DiffArray axis_diff(const StaggeredGrid& g, const std::array<int, 3>& s,
                    const std::vector<double>& v, int axis) {
    DiffArray out;
    out.shape = s;
    bool per = g.periodic(axis);
    out.shape[axis] = per ? s[axis] : s[axis] - 1;
    require(out.shape[axis] >= 1, ErrorKind::PlacementMismatch, "difference stencil too short");
    out.values.assign(static_cast<std::size_t>(out.shape[0]) * out.shape[1] * out.shape[2], 0.0);
    double inv_h = 1.0 / g.spacing(axis);
    auto idx_in = [&](int i, int j, int k) {
        return (static_cast<std::size_t>(i) * s[1] + j) * s[2] + k;
    };
    std::size_t o = 0;
    for (int i = 0; i < out.shape[0]; ++i)
        for (int j = 0; j < out.shape[1]; ++j)
            for (int k = 0; k < out.shape[2]; ++k, ++o) {
                std::array<int, 3> hi{i, j, k};
                hi[axis] = per ? (hi[axis] + 1) % s[axis] : hi[axis] + 1;
                out.values[o] = (v[idx_in(hi[0], hi[1], hi[2])] - v[idx_in(i, j, k)]) * inv_h;
            }
    return out;
}

double l2_sq_of_array(const StaggeredGrid& g, const std::vector<double>& v) {
    double w = g.cell_volume();
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return sum * w;
}

double sup_of_array(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

struct CompView {
    std::array<int, 3> shape;
    const std::vector<double>* values;
};

double norm_of_components(const StaggeredGrid& g, const std::vector<CompView>& comps,
                          NormKind kind) {
    int ndim = g.dims();
    if (kind == NormKind::Sup) {
        double m = 0.0;
        for (auto& c : comps) m = std::max(m, sup_of_array(*c.values));
        return m;
    }
    double total = 0.0;
    for (auto& c : comps) total += l2_sq_of_array(g, *c.values);
    if (kind == NormKind::H1 || kind == NormKind::H2) {
        for (auto& c : comps) {
            for (int a = 0; a < ndim; ++a) {
                if (g.dims() == 3 && c.shape[a] < 2 && g.wall(a)) continue;
                if (c.shape[a] < 2 && !g.periodic(a)) continue;
                DiffArray d1 = axis_diff(g, c.shape, *c.values, a);
                total += l2_sq_of_array(g, d1.values);
                if (kind == NormKind::H2) {
                    for (int b = a; b < ndim; ++b) {
                        if (d1.shape[b] < 2 && !g.periodic(b)) continue;
                        DiffArray d2 = axis_diff(g, d1.shape, d1.values, b);
                        total += l2_sq_of_array(g, d2.values);
                    }
                }
            }
        }
    }
    return std::sqrt(total);
}

}  // namespace

double field_norm(const ScalarField& u, NormKind kind) {
    if (kind == NormKind::L2) {
        const auto& g = u.grid();
        double sum = 0.0;
        for_each(u.shape(), [&](int i, int j, int k) {
            double v = u.at(i, j, k);
            sum += quad_weight(g, u.shape(), u.placement(), -1, i, j, k) * v * v;
        });
        return std::sqrt(sum);
    }
    return norm_of_components(u.grid(), {{u.shape(), &u.values()}}, kind);
}

double field_norm(const VectorField& u, NormKind kind) {
    if (kind == NormKind::L2) {
        const auto& g = u.grid();
        double sum = 0.0;
        for (int d = 0; d < u.n_comps(); ++d) {
            for_each(u.shape(d), [&](int i, int j, int k) {
                double v = u.at(d, i, j, k);
                sum += quad_weight(g, u.shape(d), u.placement(), d, i, j, k) * v * v;
            });
        }
        return std::sqrt(sum);
    }
    std::vector<CompView> comps;
    for (int d = 0; d < u.n_comps(); ++d) comps.push_back({u.shape(d), &u.comp(d)});
    return norm_of_components(u.grid(), comps, kind);
}

double sup_norm(const VectorField& u) { return field_norm(u, NormKind::Sup); }

double diff_norm(const ScalarField& a, const ScalarField& b, NormKind kind) {
    check_same_grid(a.grid(), b.grid(), "diff_norm");
    require(a.placement() == b.placement(), ErrorKind::PlacementMismatch, "diff_norm placements");
    ScalarField d(a.grid(), a.placement());
    for (std::size_t i = 0; i < d.size(); ++i) d.values()[i] = a.values()[i] - b.values()[i];
    return field_norm(d, kind);
}

double diff_norm(const VectorField& a, const VectorField& b, NormKind kind) {
    check_same_grid(a.grid(), b.grid(), "diff_norm");
    require(a.placement() == b.placement(), ErrorKind::PlacementMismatch, "diff_norm placements");
    VectorField d(a.grid(), a.placement());
    for (int c = 0; c < d.n_comps(); ++c)
        for (std::size_t i = 0; i < d.comp(c).size(); ++i)
            d.comp(c)[i] = a.comp(c)[i] - b.comp(c)[i];
    return field_norm(d, kind);
}

VectorField face_average_of_squared(const ScalarField& f) {
    require(f.placement() == Placement::Node, ErrorKind::PlacementMismatch,
            "face_average_of_squared needs NODE");
    const auto& g = f.grid();
    VectorField out(g, Placement::Face);
    Accessor nn{&g, f.shape()};
    for (int d = 0; d < out.n_comps(); ++d) {
        Accessor fd{&g, out.shape(d)};
        // transverse axes of the face are cell-aligned; their bounding node
        // pairs always exist
        std::array<int, 2> tr{-1, -1};
        int ntr = 0;
        for (int a = 0; a < 3; ++a) {
            bool node_aligned = g.dims() == 1 ? true : (a == d);
            if (!node_aligned && a < g.dims()) tr[ntr++] = a;
        }
        if (g.dims() == 3) {
            tr = {cyc(d, 1), cyc(d, 2)};
            ntr = 2;
        }
        for_each(out.shape(d), [&](int i, int j, int k) {
            double sum = 0.0;
            int cnt = 0;
            int reps = 1 << ntr;
            for (int r = 0; r < reps; ++r) {
                std::array<int, 3> c{i, j, k};
                bool ok = true;
                for (int m = 0; m < ntr; ++m) {
                    int off = (r >> m) & 1;
                    c[tr[m]] += off;
                    ok = ok && g.wrap(tr[m], nn.shape[tr[m]], c[tr[m]]);
                }
                if (!ok) continue;
                double v = f.values()[nn.idx(c)];
                sum += v * v;
                ++cnt;
            }
            out.comp(d)[fd.idx(i, j, k)] = sum / cnt;
        });
    }
    return out;
}

ScalarField vector_sq_to_nodes(const VectorField& A, bool wall_extrapolate) {
    require(A.placement() == Placement::Face || A.placement() == Placement::Edge,
            ErrorKind::PlacementMismatch, "vector_sq_to_nodes needs EDGE or FACE");
    const auto& g = A.grid();
    ScalarField out(g, Placement::Node);
    Accessor nn{&g, out.shape()};
    bool face = A.placement() == Placement::Face;
    for (int d = 0; d < A.n_comps(); ++d) {
        Accessor ad{&g, A.shape(d)};
        std::vector<int> caxes;  // cell-aligned axes of this component
        for (int a = 0; a < g.dims(); ++a) {
            bool cell_aligned = g.dims() == 1 ? !face : (face ? (a != d) : (a == d));
            if (cell_aligned) caxes.push_back(a);
        }
        for_each(out.shape(), [&](int i, int j, int k) {
            std::array<int, 3> node{i, j, k};
            int ext_axis = -1;
            bool ext_lo = true;
            if (wall_extrapolate) {
                for (int a : caxes) {
                    if (!g.wall(a)) continue;
                    if (node[a] == 0) {
                        ext_axis = a;
                        ext_lo = true;
                        break;
                    }
                    if (node[a] == nn.shape[a] - 1) {
                        ext_axis = a;
                        ext_lo = false;
                        break;
                    }
                }
            }
            std::vector<int> en_axes;
            for (int a : caxes)
                if (a != ext_axis) en_axes.push_back(a);
            double sum = 0.0;
            int cnt = 0;
            int reps = 1 << en_axes.size();
            for (int r = 0; r < reps; ++r) {
                std::array<int, 3> c = node;
                bool ok = true;
                for (std::size_t m = 0; m < en_axes.size(); ++m) {
                    int a = en_axes[m];
                    c[a] += ((r >> m) & 1) ? -1 : 0;
                    ok = ok && g.wrap(a, ad.shape[a], c[a]);
                }
                if (!ok) continue;
                if (ext_axis >= 0) {
                    int n = ad.shape[ext_axis];
                    auto sq_at = [&](int m) {
                        std::array<int, 3> q = c;
                        q[ext_axis] = ext_lo ? m : n - 1 - m;
                        double v = A.comp(d)[ad.idx(q)];
                        return v * v;
                    };
                    double ext = (n >= 3) ? 1.875 * sq_at(0) - 1.25 * sq_at(1) + 0.375 * sq_at(2)
                                 : (n == 2) ? 1.5 * sq_at(0) - 0.5 * sq_at(1)
                                            : sq_at(0);
                    sum += std::max(ext, 0.0);
                    ++cnt;
                } else {
                    double v = A.comp(d)[ad.idx(c)];
                    sum += v * v;
                    ++cnt;
                }
            }
            out.values()[nn.idx(i, j, k)] += cnt > 0 ? sum / cnt : 0.0;
        });
    }
    return out;
}

CgResult conjugate_gradient(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
    const std::vector<double>& rhs, std::vector<double>& x, double rel_tol, int max_iter) {
    std::size_t n = rhs.size();
    if (x.size() != n) x.assign(n, 0.0);
    std::vector<double> r(n), p(n), Ap(n);
    apply(x, Ap);
    double rr = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = rhs[i] - Ap[i];
        rr += r[i] * r[i];
        bb += rhs[i] * rhs[i];
    }
    double tol2 = rel_tol * rel_tol * std::max(bb, 1e-300);
    CgResult res;
    if (rr <= tol2 || bb == 0.0) {
        res.converged = true;
        res.residual = std::sqrt(rr);
        return res;
    }
    p = r;
    if (max_iter <= 0) max_iter = static_cast<int>(6 * n) + 200;
    for (int it = 0; it < max_iter; ++it) {
        apply(p, Ap);
        double pAp = 0.0;
        for (std::size_t i = 0; i < n; ++i) pAp += p[i] * Ap[i];
        if (pAp <= 0.0) fail(ErrorKind::SolverFailure, "cg: operator not positive definite");
        double alpha = rr / pAp;
        double rr_new = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
            rr_new += r[i] * r[i];
        }
        res.iterations = it + 1;
        if (rr_new <= tol2) {
            res.converged = true;
            res.residual = std::sqrt(rr_new);
            return res;
        }
        double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    res.residual = std::sqrt(rr);
    return res;
}

namespace {

void subtract_mean(std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    for (double& x : v) x -= m;
}

}  // namespace

HodgeResult hodge_decompose(const VectorField& A, double tol, int max_iter) {
    const auto& g = A.grid();
    require(g.dims() == 3, ErrorKind::PlacementMismatch, "hodge_decompose is three-dimensional");
    bool all_periodic = g.wall_axis_count() == 0;
    HodgeResult out;

    if (A.placement() == Placement::Edge) {
        // p at nodes with p = 0 on wall boundaries; -div_dual(grad p) = -div_dual A
        ScalarField p(g, Placement::Node);
        Accessor nn{&g, p.shape()};
        auto mask_boundary = [&](std::vector<double>& v) {
            for_each(p.shape(), [&](int i, int j, int k) {
                std::array<int, 3> c{i, j, k};
                for (int a = 0; a < 3; ++a)
                    if (g.wall(a) && (c[a] == 0 || c[a] == nn.shape[a] - 1)) {
                        v[nn.idx(i, j, k)] = 0.0;
                        break;
                    }
            });
        };
        auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
            ScalarField px(g, Placement::Node);
            px.values() = x;
            if (!all_periodic) mask_boundary(px.values());
            ScalarField lap = div_dual(grad(px));
            y = lap.values();
            for (double& v : y) v = -v;
            if (!all_periodic)
                mask_boundary(y);
            else
                subtract_mean(y);
        };
        ScalarField rhs_f = div_dual(A);
        std::vector<double> rhs = rhs_f.values();
        for (double& v : rhs) v = -v;
        if (!all_periodic)
            mask_boundary(rhs);
        else
            subtract_mean(rhs);
        std::vector<double> x(rhs.size(), 0.0);
        auto cg = conjugate_gradient(apply, rhs, x, tol, max_iter);
        if (!cg.converged) fail(ErrorKind::SolverFailure, "hodge poisson stalled (edge path)");
        if (!all_periodic)
            mask_boundary(x);
        else
            subtract_mean(x);
        p.values() = x;
        out.potential = p;
        out.iterations = cg.iterations;
        VectorField gp = grad(p);
        VectorField B(g, Placement::Edge);
        for (int d = 0; d < 3; ++d)
            for (std::size_t i = 0; i < B.comp(d).size(); ++i)
                B.comp(d)[i] = A.comp(d)[i] - gp.comp(d)[i];
        out.solenoidal = B;
        return out;
    }

    require(A.placement() == Placement::Face, ErrorKind::PlacementMismatch,
            "hodge_decompose needs EDGE or FACE");
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        ScalarField px(g, Placement::Cell);
        px.values() = x;
        ScalarField lap = divergence(grad_dual(px));
        y = lap.values();
        for (double& v : y) v = -v;
        if (all_periodic) subtract_mean(y);
    };
    ScalarField rhs_f = divergence(A);
    std::vector<double> rhs = rhs_f.values();
    for (double& v : rhs) v = -v;
    if (all_periodic) subtract_mean(rhs);
    std::vector<double> x(rhs.size(), 0.0);
    auto cg = conjugate_gradient(apply, rhs, x, tol, max_iter);
    if (!cg.converged) fail(ErrorKind::SolverFailure, "hodge poisson stalled (face path)");
    if (all_periodic) subtract_mean(x);
    ScalarField p(g, Placement::Cell);
    p.values() = x;
    out.potential = p;
    out.iterations = cg.iterations;
    VectorField gp = grad_dual(p);
    VectorField B(g, Placement::Face);
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < B.comp(d).size(); ++i)
            B.comp(d)[i] = A.comp(d)[i] - gp.comp(d)[i];
    out.solenoidal = B;
    return out;
}

double divcurl_probe(const VectorField& u) {
    const auto& g = u.grid();
    require(g.dims() == 3, ErrorKind::PlacementMismatch, "divcurl_probe is three-dimensional");
    double div_l2, curl_l2;
    if (u.placement() == Placement::Edge) {
        div_l2 = field_norm(div_dual(u), NormKind::L2);
        curl_l2 = field_norm(curl(u), NormKind::L2);
    } else {
        div_l2 = field_norm(divergence(u), NormKind::L2);
        curl_l2 = field_norm(curl_dual(u), NormKind::L2);
    }
    double bdry_sq = 0.0;
    for (int a = 0; a < 3; ++a) {
        if (!g.wall(a)) continue;
        Accessor ad{&g, u.shape(a)};
        int b = cyc(a, 1), c = cyc(a, 2);
        double dA = g.spacing(b) * g.spacing(c);
        // FACE normal components sit on the boundary plane; EDGE components
        // are sampled one half-spacing inside.
        for (int ib = 0; ib < ad.shape[b]; ++ib)
            for (int ic = 0; ic < ad.shape[c]; ++ic) {
                std::array<int, 3> p{};
                p[a] = 0;
                p[b] = ib;
                p[c] = ic;
                double v_lo = u.comp(a)[ad.idx(p)];
                p[a] = ad.shape[a] - 1;
                double v_hi = u.comp(a)[ad.idx(p)];
                bdry_sq += (v_lo * v_lo + v_hi * v_hi) * dA;
            }
    }
    double h1 = field_norm(u, NormKind::H1);
    return h1 / (div_l2 + curl_l2 + std::sqrt(bdry_sq) + 1e-30);
}

}  // namespace meissner
