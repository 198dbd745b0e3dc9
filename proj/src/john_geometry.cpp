#include "currentlab/john_geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <vector>

namespace currentlab {

namespace {

bool is_symmetric_set(const Eigen::MatrixXd& P)
{
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
        bool found = false;
        for (Eigen::Index j = 0; j < P.rows() && !found; ++j)
            found = (P.row(i) + P.row(j)).cwiseAbs().maxCoeff() <= 1e-9;
        if (!found)
            return false;
    }
    return true;
}

// Facets of conv(G) for a symmetric full-rank G, by trying every n-subset of
// generators as a supporting hyperplane a . x = 1.
Eigen::MatrixXd enumerate_facets(const Eigen::MatrixXd& G)
{
    const int n = static_cast<int>(G.cols());
    const int m = static_cast<int>(G.rows());
    std::vector<Eigen::VectorXd> normals;
    std::vector<int> pick(m, 0);
    std::fill(pick.end() - n, pick.end(), 1);
    Eigen::MatrixXd S(n, n);
    const double scale = G.cwiseAbs().maxCoeff();
    do {
        int r = 0;
        for (int i = 0; i < m; ++i)
            if (pick[i])
                S.row(r++) = G.row(i);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
        if (lu.rank() < n)
            continue;
        const Eigen::VectorXd a = lu.solve(Eigen::VectorXd::Ones(n));
        if ((G * a).maxCoeff() > 1.0 + 1e-9)
            continue;
        bool dup = false;
        for (const auto& b : normals)
            dup = dup || (a - b).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, 1.0 / scale);
        if (!dup)
            normals.push_back(a);
    } while (std::next_permutation(pick.begin(), pick.end()));
    Eigen::MatrixXd F(static_cast<Eigen::Index>(normals.size()), n);
    for (std::size_t i = 0; i < normals.size(); ++i)
        F.row(static_cast<Eigen::Index>(i)) = normals[i].transpose();
    return F;
}

Eigen::MatrixXd read_matrix(const nlohmann::json& rows, int n, const std::string& id)
{
    if (!rows.is_array() || rows.empty())
        throw Error("norm '" + id + "': generators must be a nonempty list");
    Eigen::MatrixXd G(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
            throw Error("norm '" + id + "': generator " + std::to_string(i) + " needs " +
                        std::to_string(n) + " coordinates");
        for (int d = 0; d < n; ++d)
            G(static_cast<Eigen::Index>(i), d) = rows[i][d].get<double>();
    }
    return G;
}

}  // namespace

Eigen::MatrixXd centered_mvee(const Eigen::MatrixXd& points, const MveeOptions& opts)
{
    const Eigen::Index m = points.rows();
    const double n = static_cast<double>(points.cols());
    Eigen::VectorXd u = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
    if (opts.random_start) {
        std::mt19937_64 rng(*opts.random_start);
        std::uniform_real_distribution<double> w(0.1, 1.0);
        for (Eigen::Index i = 0; i < m; ++i)
            u(i) = w(rng);
        u /= u.sum();
    }

    Eigen::VectorXd M(m);
    auto distances = [&]() {
        const Eigen::MatrixXd X = points.transpose() * u.asDiagonal() * points;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(X);
        if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0))
            throw Error("degenerate point set for the enclosing ellipsoid");
        const Eigen::MatrixXd Y = ldlt.solve(points.transpose());
        M = (points.transpose().cwiseProduct(Y)).colwise().sum().transpose();
        return X;
    };

    Eigen::MatrixXd X = distances();
    for (long it = 0; it < opts.max_iterations; ++it) {
        Eigen::Index j = 0;
        const double Mj = M.maxCoeff(&j);
        Eigen::Index k = -1;
        for (Eigen::Index i = 0; i < m; ++i)
            if (u(i) > 0 && (k < 0 || M(i) < M(k)))
                k = i;
        const double Mk = M(k);
        if (Mj <= n * (1 + opts.tolerance) && Mk >= n * (1 - opts.tolerance))
            break;
        if (Mj - n >= n - Mk) {
            const double beta = (Mj - n) / (n * (Mj - 1));
            u *= 1 - beta;
            u(j) += beta;
        } else {
            // Away step: shift weight off the point nearest the centre.
            const double drop = -u(k) / (1 - u(k));
            const double beta = Mk > 1 ? std::max((Mk - n) / (n * (Mk - 1)), drop) : drop;
            u *= 1 - beta;
            u(k) += beta;
            if (beta == drop)
                u(k) = 0;
        }
        X = distances();
    }
    return X.inverse() / M.maxCoeff();
}

NormBall::NormBall(Eigen::MatrixXd generators) : generators_(std::move(generators))
{
    const Eigen::Index n = generators_.cols();
    if (n < 1 || generators_.rows() < 2)
        throw Error("norm ball needs generators in dimension >= 1");
    if (!generators_.allFinite())
        throw Error("norm ball generator is not finite");
    if (!is_symmetric_set(generators_))
        throw Error("norm ball generators are not centrally symmetric");
    if (Eigen::FullPivLU<Eigen::MatrixXd>(generators_).rank() < n)
        throw Error("degenerate hull: generators do not span the space");
    facets_ = enumerate_facets(generators_);
    john_Q_ = centered_mvee(facets_).inverse();
    dual_P_ = centered_mvee(generators_).inverse();
    john_Q_ = 0.5 * (john_Q_ + john_Q_.transpose()).eval();
    dual_P_ = 0.5 * (dual_P_ + dual_P_.transpose()).eval();
}

Eigen::MatrixXd john_matrix(const NormBall& ball, const MveeOptions& opts)
{
    const Eigen::MatrixXd Q = centered_mvee(ball.facet_normals(), opts).inverse();
    return 0.5 * (Q + Q.transpose());
}

double norm_eval(const NormBall& ball, const Eigen::VectorXd& v)
{
    if (v.size() != ball.dim())
        throw Error("dimension mismatch in norm evaluation");
    return std::max(0.0, (ball.facet_normals() * v).maxCoeff());
}

double dual_norm_eval(const NormBall& ball, const Eigen::VectorXd& xi)
{
    if (xi.size() != ball.dim())
        throw Error("dimension mismatch in dual norm evaluation");
    return std::max(0.0, (ball.generators() * xi).maxCoeff());
}

NormBall linf_ball(int n)
{
    Eigen::MatrixXd G(1 << n, n);
    for (int s = 0; s < (1 << n); ++s)
        for (int d = 0; d < n; ++d)
            G(s, d) = (s >> d) & 1 ? 1.0 : -1.0;
    return NormBall(G);
}

NormBall l1_ball(int n)
{
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * n, n);
    for (int d = 0; d < n; ++d) {
        G(2 * d, d) = 1.0;
        G(2 * d + 1, d) = -1.0;
    }
    return NormBall(G);
}

std::map<std::string, NormBall> read_norms(std::istream& in)
{
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("norms file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw Error("norms file must hold an object keyed by norm id");
    std::map<std::string, NormBall> out;
    for (const auto& [id, spec] : doc.items()) {
        if (!spec.is_object() || !spec.contains("dim") || !spec.contains("generators"))
            throw Error("norm '" + id + "' needs 'dim' and 'generators'");
        const int n = spec["dim"].get<int>();
        if (n < 1)
            throw Error("norm '" + id + "': dim must be positive");
        try {
            out.emplace(id, NormBall(read_matrix(spec["generators"], n, id)));
        } catch (const nlohmann::json::exception& e) {
            throw Error("norm '" + id + "': " + e.what());
        }
    }
    return out;
}

std::map<std::string, NormBall> read_norms(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    return read_norms(in);
}

}  // namespace currentlab
