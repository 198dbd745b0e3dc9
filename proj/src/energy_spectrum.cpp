#include "currentlab/energy_spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace currentlab {

namespace {

const NormBall* lookup_ball(const SimplicialCurrent& T, Eigen::Index c, const NormTable& norms)
{
    const std::string& id = T.tag(c);
    if (id.empty())
        return nullptr;
    const auto it = norms.find(id);
    if (it == norms.end())
        throw Error("unknown norm id '" + id + "'");
    if (it->second.dim() != T.dim())
        throw Error("norm '" + id + "' has dimension " + std::to_string(it->second.dim()) +
                    " but tags a " + std::to_string(T.dim()) + "-cell");
    return &it->second;
}

// Linear map from the k+1 nodal values of a cell to its differential in the
// cell frame (k x (k+1)).
Eigen::MatrixXd differential_operator(const Eigen::MatrixXd& P)
{
    const Eigen::Index k = P.rows() - 1;
    const Eigen::MatrixXd E = edge_matrix(P);
    const Eigen::MatrixXd G = E.transpose() * E;
    Eigen::MatrixXd D(k, k + 1);
    D.col(0).setConstant(-1.0);
    D.rightCols(k).setIdentity();
    return cell_frame(P).transpose() * E * G.ldlt().solve(D);
}

double unit_ball_volume(int k)
{
    return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

Eigen::VectorXd local_values(const SimplicialCurrent& T, Eigen::Index c, const PLFunction& f)
{
    Eigen::VectorXd v(T.dim() + 1);
    for (int j = 0; j <= T.dim(); ++j)
        v(j) = f(T.cells()(c, j));
    return v;
}

void check_function(const SimplicialCurrent& T, const PLFunction& f)
{
    if (f.size() != T.num_vertices())
        throw Error("function has " + std::to_string(f.size()) + " values for " +
                    std::to_string(T.num_vertices()) + " vertices");
    if (!f.allFinite())
        throw Error("function has non-finite values");
}

// Fixes the sign so that the first significant entry is positive.
void normalize_sign(Eigen::Ref<Eigen::VectorXd> v)
{
    const double m = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > 1e-8 * m) {
            if (v(i) < 0)
                v = -v;
            return;
        }
}

struct ActiveSystem {
    std::vector<int> to_full;
    Eigen::SparseMatrix<double> K, M;
};

ActiveSystem restrict_to_active(const SimplicialCurrent& T, const Pencil& P)
{
    ActiveSystem S;
    const auto active = T.active_vertices();
    std::vector<int> to_active(active.size(), -1);
    for (std::size_t i = 0; i < active.size(); ++i)
        if (active[i]) {
            to_active[i] = static_cast<int>(S.to_full.size());
            S.to_full.push_back(static_cast<int>(i));
        }
    const auto n = static_cast<Eigen::Index>(S.to_full.size());
    auto restrict = [&](const Eigen::SparseMatrix<double>& A) {
        std::vector<Eigen::Triplet<double>> trip;
        for (Eigen::Index col = 0; col < A.outerSize(); ++col)
            for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
                const int r = to_active[it.row()], c = to_active[it.col()];
                if (r >= 0 && c >= 0)
                    trip.emplace_back(r, c, it.value());
            }
        Eigen::SparseMatrix<double> B(n, n);
        B.setFromTriplets(trip.begin(), trip.end());
        return B;
    };
    S.K = restrict(P.K);
    S.M = restrict(P.M);
    return S;
}

struct Eigenpairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    int iterations = 0;
};

Eigenpairs dense_pairs(const ActiveSystem& S, int K_count)
{
    const Eigen::MatrixXd K = S.K, M = S.M;
    const Eigen::Index n = K.rows();
    const Eigen::VectorXd w = M * Eigen::VectorXd::Ones(n);
    Eigen::Index p = 0;
    w.maxCoeff(&p);
    // Basis of the mean-zero space {x : w . x = 0}.
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n - 1);
    for (Eigen::Index i = 0, col = 0; i < n; ++i) {
        if (i == p)
            continue;
        Z(i, col) = 1.0;
        Z(p, col) = -w(i) / w(p);
        ++col;
    }
    const Eigen::MatrixXd Kz = Z.transpose() * K * Z;
    const Eigen::MatrixXd Mz = Z.transpose() * M * Z;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Kz, Mz);
    if (ges.info() != Eigen::Success)
        throw Error("dense eigensolver failed");
    return {ges.eigenvalues().head(K_count), Z * ges.eigenvectors().leftCols(K_count), 0};
}

Eigenpairs shift_invert_pairs(const ActiveSystem& S, int K_count, const SpectrumOptions& opts)
{
    const Eigen::Index n = S.K.rows();
    const Eigen::VectorXd w = S.M * Eigen::VectorXd::Ones(n);
    const double wsum = w.sum();
    auto deflate = [&](Eigen::MatrixXd& X) {
        const Eigen::RowVectorXd c = (w.transpose() * X) / wsum;
        X.rowwise() -= c;
    };

    const double trK = S.K.diagonal().sum(), trM = S.M.diagonal().sum();
    double sigma = -0.1 * (trK / trM) / static_cast<double>(n);
    if (!(sigma < 0))
        sigma = -1.0;
    const Eigen::SparseMatrix<double> A = S.K - sigma * S.M;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success)
        throw Error("factorization of the shifted pencil failed");

    auto inf_norm = [](const Eigen::SparseMatrix<double>& B) {
        return (B.cwiseAbs() * Eigen::VectorXd::Ones(B.cols())).maxCoeff();
    };
    const double normK = inf_norm(S.K), normM = inf_norm(S.M);

    const Eigen::Index b = std::min<Eigen::Index>(K_count + std::max(8, K_count), n - 1);
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXd X(n, b);
    for (Eigen::Index j = 0; j < b; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            X(i, j) = g(rng);
    deflate(X);

    Eigenpairs out;
    Eigen::VectorXd lambda;
    Eigen::VectorXd previous = Eigen::VectorXd::Constant(K_count, INFINITY);
    for (int it = 1; it <= opts.max_iterations; ++it) {
        Eigen::MatrixXd Y = solver.solve(S.M * X);
        deflate(Y);
        const Eigen::MatrixXd Q = Y.householderQr().householderQ() * Eigen::MatrixXd::Identity(n, b);
        const Eigen::MatrixXd Kr = Q.transpose() * (S.K * Q);
        const Eigen::MatrixXd Mr = Q.transpose() * (S.M * Q);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Kr, Mr);
        if (ges.info() != Eigen::Success)
            throw Error("Rayleigh-Ritz step failed");
        X = Q * ges.eigenvectors();
        lambda = ges.eigenvalues();
        out.iterations = it;

        // The plain residual has a round-off floor of order eps |K| / |M|,
        // which on thin cells sits far above the tolerance. Past a small
        // normwise backward error we stop once the residual stalls.
        bool converged = true;
        for (int i = 0; i < K_count; ++i) {
            const Eigen::VectorXd Mx = S.M * X.col(i);
            const double r = (S.K * X.col(i) - lambda(i) * Mx).norm();
            const double rel = r / Mx.norm();
            const bool small = rel <= opts.tolerance * std::max(1.0, std::abs(lambda(i)));
            const bool stalled = r <= opts.tolerance * (normK + std::abs(lambda(i)) * normM) * X.col(i).norm() &&
                                 rel > 0.5 * previous(i);
            converged = converged && (small || stalled);
            previous(i) = rel;
        }
        if (converged)
            break;
    }
    out.values = lambda.head(K_count);
    out.vectors = X.leftCols(K_count);
    return out;
}

}  // namespace

Eigen::MatrixXd cell_frame(const Eigen::MatrixXd& P)
{
    const Eigen::Index k = P.rows() - 1, N = P.cols();
    if (k == N)
        return Eigen::MatrixXd::Identity(N, N);
    Eigen::MatrixXd F = edge_matrix(P);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < j; ++i)
            F.col(j) -= F.col(i).dot(F.col(j)) * F.col(i);
        F.col(j).normalize();
    }
    return F;
}

Eigen::VectorXd cell_differential(const SimplicialCurrent& T, Eigen::Index c, const PLFunction& f)
{
    if (T.dim() == 0)
        return Eigen::VectorXd(0);
    return differential_operator(T.cell_points(c)) * local_values(T, c, f);
}

double evaluate_pl(const SimplicialCurrent& T, const PLFunction& f, const Eigen::VectorXd& x)
{
    check_function(T, f);
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        const Eigen::MatrixXd P = T.cell_points(c);
        const auto [lambda, dist] = barycentric(P, x);
        const double h = std::max(1.0, longest_edge(P));
        if (dist <= 1e-9 * h && lambda.minCoeff() >= -1e-9)
            return lambda.dot(local_values(T, c, f));
    }
    throw Error("point is not on the support");
}

double dirichlet_energy(const SimplicialCurrent& T, const PLFunction& f, const NormTable& norms)
{
    check_function(T, f);
    if (T.dim() == 0)
        return 0.0;
    double E = 0.0;
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        const Eigen::VectorXd xi = cell_differential(T, c, f);
        const NormBall* ball = lookup_ball(T, c, norms);
        const double dual = ball ? dual_norm_eval(*ball, xi) : xi.norm();
        E += std::abs(T.mults()(c)) * T.cell_volume(c) * dual * dual;
    }
    return E;
}

double integrate(const SimplicialCurrent& T, const PLFunction& f)
{
    check_function(T, f);
    double s = 0.0;
    for (Eigen::Index c = 0; c < T.num_cells(); ++c)
        s += std::abs(T.mults()(c)) * T.cell_volume(c) * local_values(T, c, f).mean();
    return s;
}

double rayleigh_quotient(const SimplicialCurrent& T, const PLFunction& f, const NormTable& norms)
{
    check_function(T, f);
    const double m = mass(T);
    if (!(m > 0))
        throw Error("zero denominator");
    const PLFunction g = f.array() - integrate(T, f) / m;
    // Exact quadrature of g^2: the local mass matrix of a linear element.
    double denom = 0.0;
    const int k = T.dim();
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        const Eigen::VectorXd v = local_values(T, c, g);
        const double s = v.sum();
        denom += std::abs(T.mults()(c)) * T.cell_volume(c) * (s * s + v.squaredNorm()) /
                 ((k + 1.0) * (k + 2.0));
    }
    if (!(denom > 1e-14 * m))
        throw Error("zero denominator");
    return dirichlet_energy(T, g, norms) / denom;
}

Pencil assemble_pencil(const SimplicialCurrent& T, const NormTable& norms)
{
    const int k = T.dim();
    std::vector<Eigen::Triplet<double>> kt, mt;
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        const Eigen::MatrixXd P = T.cell_points(c);
        const double w = std::abs(T.mults()(c)) * simplex_volume(P);
        Eigen::MatrixXd Kl = Eigen::MatrixXd::Zero(k + 1, k + 1);
        if (k > 0) {
            const Eigen::MatrixXd B = differential_operator(P);
            const NormBall* ball = lookup_ball(T, c, norms);
            Kl = ball ? Eigen::MatrixXd(B.transpose() * ball->dual_P() * B) : Eigen::MatrixXd(B.transpose() * B);
            Kl *= w;
        }
        const double mscale = w / ((k + 1.0) * (k + 2.0));
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= k; ++j) {
                const int a = T.cells()(c, i), b = T.cells()(c, j);
                if (Kl(i, j) != 0.0)
                    kt.emplace_back(a, b, Kl(i, j));
                mt.emplace_back(a, b, mscale * (i == j ? 2.0 : 1.0));
            }
    }
    Pencil out;
    out.K.resize(T.num_vertices(), T.num_vertices());
    out.M.resize(T.num_vertices(), T.num_vertices());
    out.K.setFromTriplets(kt.begin(), kt.end());
    out.M.setFromTriplets(mt.begin(), mt.end());
    return out;
}

SpectrumResult minmax_spectrum(const SimplicialCurrent& T, int K_count, const NormTable& norms,
                               const SpectrumOptions& opts)
{
    if (K_count < 1)
        throw Error("number of eigenvalues must be positive");
    const ActiveSystem S = restrict_to_active(T, assemble_pencil(T, norms));
    const auto n = static_cast<int>(S.to_full.size());
    if (K_count > n - 1)
        throw Error("requested " + std::to_string(K_count) +
                    " eigenvalues but the mean-zero space has dimension " + std::to_string(std::max(0, n - 1)));

    SpectrumResult out;
    Eigenpairs pairs;
    if (n <= opts.dense_threshold) {
        pairs = dense_pairs(S, K_count);
        out.method = "dense";
    } else {
        pairs = shift_invert_pairs(S, K_count, opts);
        out.method = "shift-invert";
    }
    out.iterations = pairs.iterations;
    out.eigenvalues = pairs.values;
    out.residuals.resize(K_count);
    out.eigenvectors = Eigen::MatrixXd::Zero(T.num_vertices(), K_count);
    for (int i = 0; i < K_count; ++i) {
        Eigen::VectorXd v = pairs.vectors.col(i);
        v /= std::sqrt(v.dot(S.M * v));
        normalize_sign(v);
        const Eigen::VectorXd Mv = S.M * v;
        out.residuals(i) = (S.K * v - out.eigenvalues(i) * Mv).norm() / Mv.norm();
        for (int a = 0; a < n; ++a)
            out.eigenvectors(S.to_full[a], i) = v(a);
    }
    return out;
}

std::vector<double> dyadic_radii(double r0, int j_max)
{
    std::vector<double> radii;
    for (int j = 0; j <= j_max; ++j)
        radii.push_back(std::ldexp(r0, -j));
    return radii;
}

ApdilEstimate estimate_apdil(const SimplicialCurrent& T, const PLFunction& f, const Eigen::VectorXd& x,
                             const std::vector<double>& radii, const std::vector<double>& t_grid,
                             const ApdilOptions& opts)
{
    check_function(T, f);
    if (radii.empty() || t_grid.empty())
        throw Error("apdil needs radii and a t grid");
    for (std::size_t i = 0; i < radii.size(); ++i)
        if (!(radii[i] > 0) || (i > 0 && !(radii[i] < radii[i - 1])))
            throw Error("apdil radii must be positive and decreasing");
    const double fx = evaluate_pl(T, f, x);
    const int k = T.dim();
    const double omega = unit_ball_volume(k);

    ApdilEstimate est;
    est.t_grid = t_grid;
    std::sort(est.t_grid.begin(), est.t_grid.end());
    est.radii = radii;
    est.density.assign(est.t_grid.size(), std::vector<double>(radii.size(), 0.0));

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        const double r = radii[ri];
        std::vector<double> measure(est.t_grid.size(), 0.0);
        auto accumulate = [&](double ratio, double weight) {
            for (std::size_t ti = 0; ti < est.t_grid.size(); ++ti)
                if (ratio > est.t_grid[ti])
                    measure[ti] += weight;
        };
        for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
            const Eigen::MatrixXd P = T.cell_points(c);
            const double theta = std::abs(T.mults()(c));
            const Eigen::VectorXd vals = local_values(T, c, f);
            if (k == 0) {
                const double d = (P.row(0).transpose() - x).norm();
                if (d <= r && d > 0)
                    accumulate(std::abs(vals(0) - fx) / d, theta);
                continue;
            }
            const Eigen::RowVectorXd centroid = P.colwise().mean();
            const double spread = (P.rowwise() - centroid).rowwise().norm().maxCoeff();
            if ((centroid.transpose() - x).norm() > r + spread)
                continue;
            // Sample the k-disk cut from B_r(x) by the cell's plane, keep the
            // points inside the cell.
            const Eigen::MatrixXd E = edge_matrix(P);
            const Eigen::MatrixXd F = cell_frame(P);
            const Eigen::VectorXd p0 = P.row(0).transpose();
            const Eigen::VectorXd proj = p0 + F * (F.transpose() * (x - p0));
            const double d2 = (x - proj).squaredNorm();
            if (d2 >= r * r)
                continue;
            const double rho = std::sqrt(r * r - d2);
            const Eigen::LDLT<Eigen::MatrixXd> G(E.transpose() * E);
            const Eigen::VectorXd delta = vals.tail(k).array() - vals(0);
            const double weight = theta * omega * std::pow(rho, k) / opts.samples_per_cell;
            Eigen::VectorXd z(k);
            for (int s = 0; s < opts.samples_per_cell; ++s) {
                for (int d = 0; d < k; ++d)
                    z(d) = gauss(rng);
                z *= std::pow(unif(rng), 1.0 / k) / z.norm();
                const Eigen::VectorXd y = proj + rho * (F * z);
                const Eigen::VectorXd mu = G.solve(E.transpose() * (y - p0));
                if (mu.minCoeff() < 0 || mu.sum() > 1)
                    continue;
                const double dist = (y - x).norm();
                if (dist == 0.0)
                    continue;
                accumulate(std::abs(vals(0) + delta.dot(mu) - fx) / dist, weight);
            }
        }
        for (std::size_t ti = 0; ti < est.t_grid.size(); ++ti)
            est.density[ti][ri] = measure[ti] / (omega * std::pow(r, k));
    }

    const std::size_t first_tail = radii.size() > static_cast<std::size_t>(opts.tail)
                                       ? radii.size() - static_cast<std::size_t>(opts.tail)
                                       : 0;
    est.value = est.t_grid.back();
    for (std::size_t ti = 0; ti < est.t_grid.size(); ++ti) {
        const double theta = *std::max_element(est.density[ti].begin() + static_cast<std::ptrdiff_t>(first_tail),
                                               est.density[ti].end());
        if (theta < opts.density_tol) {
            est.value = est.t_grid[ti];
            est.resolved = true;
            break;
        }
    }
    return est;
}

double sup_ratio_dilation(const SimplicialCurrent& T, const PLFunction& f, const Eigen::VectorXd& x,
                          double r, int samples_per_cell, std::uint64_t seed)
{
    const double fx = evaluate_pl(T, f, x);
    const auto active = T.active_vertices();
    double best = 0.0;
    for (Eigen::Index i = 0; i < T.num_vertices(); ++i) {
        if (!active[i])
            continue;
        const double d = (T.vertices().row(i).transpose() - x).norm();
        if (d > 0 && d <= r)
            best = std::max(best, std::abs(f(i) - fx) / d);
    }
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo;
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        const Eigen::MatrixXd P = T.cell_points(c);
        const Eigen::VectorXd vals = local_values(T, c, f);
        Eigen::VectorXd lambda(P.rows());
        for (int s = 0; s < samples_per_cell; ++s) {
            for (Eigen::Index j = 0; j < lambda.size(); ++j)
                lambda(j) = expo(rng);
            lambda /= lambda.sum();
            const Eigen::VectorXd y = P.transpose() * lambda;
            const double d = (y - x).norm();
            if (d > 0 && d <= r)
                best = std::max(best, std::abs(lambda.dot(vals) - fx) / d);
        }
    }
    return best;
}

CellCut cut_by_functional(const SimplicialCurrent& T, const std::function<double(const Eigen::VectorXd&)>& w,
                          double t)
{
    CellCut cut(T.num_cells());
    for (Eigen::Index c = 0; c < T.num_cells(); ++c)
        cut[c] = w(T.cell_points(c).colwise().mean().transpose()) < t;
    return cut;
}

double cut_interface_mass(const SimplicialCurrent& T, const CellCut& cut)
{
    if (static_cast<Eigen::Index>(cut.size()) != T.num_cells())
        throw Error("cut labels do not match the cells");
    if (T.dim() < 1)
        throw Error("cuts need a current of dimension at least 1");
    std::vector<Eigen::Index> side_a;
    std::set<std::vector<int>> faces_b;
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        if (cut[c]) {
            side_a.push_back(c);
            continue;
        }
        for (int skip = 0; skip <= T.dim(); ++skip) {
            std::vector<int> face;
            for (int j = 0; j <= T.dim(); ++j)
                if (j != skip)
                    face.push_back(T.cells()(c, j));
            faces_b.insert(face);
        }
    }
    if (side_a.empty() || faces_b.empty())
        throw Error("cut must leave cells on both sides");
    Cells A(static_cast<Eigen::Index>(side_a.size()), T.dim() + 1);
    Multiplicities m(A.rows());
    for (std::size_t i = 0; i < side_a.size(); ++i) {
        A.row(static_cast<Eigen::Index>(i)) = T.cells().row(side_a[i]);
        m(static_cast<Eigen::Index>(i)) = T.mults()(side_a[i]);
    }
    const auto dA = boundary(SimplicialCurrent(T.vertices(), T.dim(), A, m));
    double interface = 0.0;
    for (Eigen::Index c = 0; c < dA.num_cells(); ++c) {
        std::vector<int> face;
        for (int j = 0; j < dA.dim() + 1; ++j)
            face.push_back(dA.cells()(c, j));
        if (faces_b.count(face))
            interface += std::abs(dA.mults()(c)) * dA.cell_volume(c);
    }
    return interface;
}

double cheeger_upper_bound(const SimplicialCurrent& T, const std::vector<CellCut>& cuts)
{
    if (cuts.empty())
        throw Error("empty cut list");
    double best = INFINITY;
    for (const auto& cut : cuts) {
        const double interface = cut_interface_mass(T, cut);
        double ma = 0.0, mb = 0.0;
        for (Eigen::Index c = 0; c < T.num_cells(); ++c)
            (cut[c] ? ma : mb) += std::abs(T.mults()(c)) * T.cell_volume(c);
        best = std::min(best, interface / std::min(ma, mb));
    }
    return best;
}

}  // namespace currentlab
