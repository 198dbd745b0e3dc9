#include "currentlab/meshes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace currentlab {

namespace {

SimplicialCurrent from_lists(Vertices V, int dim, const std::vector<std::vector<int>>& cells,
                             const std::vector<int>& mults)
{
    Cells C(static_cast<Eigen::Index>(cells.size()), dim + 1);
    Multiplicities M(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t r = 0; r < cells.size(); ++r) {
        for (int j = 0; j <= dim; ++j)
            C(r, j) = cells[r][j];
        M(r) = mults[r];
    }
    return SimplicialCurrent(std::move(V), dim, C, M);
}

}  // namespace

SimplicialCurrent make_polygon(int n, double radius)
{
    if (n < 3)
        throw Error("polygon needs at least 3 vertices");
    Vertices V(n, 2);
    std::vector<std::vector<int>> cells;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n;
        V.row(i) << radius * std::cos(a), radius * std::sin(a);
        cells.push_back({i, (i + 1) % n});
    }
    return from_lists(std::move(V), 1, cells, std::vector<int>(n, 1));
}

SimplicialCurrent make_segment(int n, double length)
{
    if (n < 1)
        throw Error("segment needs at least one element");
    Vertices V(n + 1, 1);
    std::vector<std::vector<int>> cells;
    for (int i = 0; i <= n; ++i)
        V(i, 0) = length * i / n;
    for (int i = 0; i < n; ++i)
        cells.push_back({i, i + 1});
    return from_lists(std::move(V), 1, cells, std::vector<int>(n, 1));
}

SimplicialCurrent make_square_loop(double side, int per_side)
{
    const int n = 4 * per_side;
    Vertices V(n, 2);
    std::vector<std::vector<int>> cells;
    for (int i = 0; i < n; ++i) {
        const int s = i / per_side;
        const double u = side * (i % per_side) / per_side;
        switch (s) {
            case 0: V.row(i) << u, 0.0; break;
            case 1: V.row(i) << side, u; break;
            case 2: V.row(i) << side - u, side; break;
            default: V.row(i) << 0.0, side - u; break;
        }
        cells.push_back({i, (i + 1) % n});
    }
    return from_lists(std::move(V), 1, cells, std::vector<int>(n, 1));
}

SimplicialCurrent make_grid_patch(double x0, double x1, double y0, double y1, int nx, int ny)
{
    return make_box_solid({uniform_axis(x0, x1, nx), uniform_axis(y0, y1, ny)},
                          [](const std::vector<int>&) { return true; });
}

SimplicialCurrent make_disk(int segments, int rings, double radius)
{
    if (segments < 3 || rings < 1)
        throw Error("disk needs at least 3 segments and 1 ring");
    Vertices V(1 + segments * rings, 2);
    V.row(0) << 0.0, 0.0;
    auto id = [&](int ring, int j) { return 1 + (ring - 1) * segments + (j % segments); };
    for (int r = 1; r <= rings; ++r)
        for (int j = 0; j < segments; ++j) {
            const double a = 2.0 * std::numbers::pi * j / segments;
            const double rho = radius * r / rings;
            V.row(id(r, j)) << rho * std::cos(a), rho * std::sin(a);
        }
    std::vector<std::vector<int>> cells;
    for (int j = 0; j < segments; ++j)
        cells.push_back({0, id(1, j), id(1, j + 1)});
    for (int r = 1; r < rings; ++r)
        for (int j = 0; j < segments; ++j) {
            cells.push_back({id(r, j), id(r + 1, j), id(r + 1, j + 1)});
            cells.push_back({id(r, j), id(r + 1, j + 1), id(r, j + 1)});
        }
    return from_lists(std::move(V), 2, cells, std::vector<int>(cells.size(), 1));
}

SimplicialCurrent make_icosphere(int subdivisions)
{
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> pts = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : pts)
        p.normalize();
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
        {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto [it, inserted] = midpoint.try_emplace(key, static_cast<int>(pts.size()));
            if (inserted)
                pts.push_back((pts[a] + pts[b]).normalized());
            return it->second;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
            next.push_back({f[0], a, c});
            next.push_back({f[1], b, a});
            next.push_back({f[2], c, b});
            next.push_back({a, b, c});
        }
        faces = std::move(next);
    }
    Vertices V(static_cast<Eigen::Index>(pts.size()), 3);
    for (std::size_t i = 0; i < pts.size(); ++i)
        V.row(i) = pts[i].transpose();
    std::vector<std::vector<int>> cells;
    for (const auto& f : faces)
        cells.push_back({f[0], f[1], f[2]});
    return from_lists(std::move(V), 2, cells, std::vector<int>(cells.size(), 1));
}

SimplicialCurrent make_revolution_surface(const std::vector<std::pair<double, double>>& profile,
                                          int m)
{
    if (profile.size() < 2)
        throw Error("revolution profile needs at least 2 samples");
    if (m < 3)
        throw Error("angular resolution must be at least 3");
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile[i].second < 0 || !std::isfinite(profile[i].second))
            throw Error("revolution profile has negative radius");
        if (i > 0 && !(profile[i].first > profile[i - 1].first))
            throw Error("revolution profile x must be strictly increasing");
    }

    std::vector<Eigen::RowVector3d> pts;
    std::vector<int> ring_start;
    std::vector<bool> pole;
    for (const auto& [x, h] : profile) {
        ring_start.push_back(static_cast<int>(pts.size()));
        pole.push_back(h == 0.0);
        if (h == 0.0) {
            pts.emplace_back(x, 0.0, 0.0);
            continue;
        }
        for (int j = 0; j < m; ++j) {
            const double a = 2.0 * std::numbers::pi * j / m;
            pts.emplace_back(x, h * std::cos(a), h * std::sin(a));
        }
    }

    // Triangles (a_j, a_{j+1}, b_{j+1}) and (a_j, b_{j+1}, b_j) have normals
    // with positive radial component, i.e. point away from the axis.
    std::vector<std::vector<int>> cells;
    for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
        auto a = [&](int j) { return pole[i] ? ring_start[i] : ring_start[i] + j % m; };
        auto b = [&](int j) { return pole[i + 1] ? ring_start[i + 1] : ring_start[i + 1] + j % m; };
        if (pole[i] && pole[i + 1])
            throw Error("revolution profile has two consecutive zero radii");
        for (int j = 0; j < m; ++j) {
            if (!pole[i])
                cells.push_back({a(j), a(j + 1), b(j + 1)});
            if (!pole[i + 1])
                cells.push_back({a(j), b(j + 1), b(j)});
        }
    }
    Vertices V(static_cast<Eigen::Index>(pts.size()), 3);
    for (std::size_t i = 0; i < pts.size(); ++i)
        V.row(i) = pts[i];
    return from_lists(std::move(V), 2, cells, std::vector<int>(cells.size(), 1));
}

std::vector<double> uniform_axis(double lo, double hi, int n)
{
    if (n < 1 || !(hi > lo))
        throw Error("grid axis needs hi > lo and at least one interval");
    std::vector<double> axis(n + 1);
    for (int i = 0; i <= n; ++i)
        axis[i] = i == n ? hi : lo + (hi - lo) * i / n;
    return axis;
}

SimplicialCurrent make_box_solid(const GridAxes& axes,
                                 const std::function<bool(const std::vector<int>&)>& inside)
{
    const int N = static_cast<int>(axes.size());
    if (N < 1)
        throw Error("grid needs at least one axis");
    std::vector<int> npts(N), stride(N);
    long long total = 1;
    for (int d = 0; d < N; ++d) {
        if (axes[d].size() < 2)
            throw Error("grid axis needs at least two breakpoints");
        npts[d] = static_cast<int>(axes[d].size());
        stride[d] = static_cast<int>(total);
        total *= npts[d];
    }

    Vertices V(total, N);
    for (long long v = 0; v < total; ++v) {
        long long r = v;
        for (int d = 0; d < N; ++d) {
            V(v, d) = axes[d][r % npts[d]];
            r /= npts[d];
        }
    }

    std::vector<int> perm(N);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<std::vector<int>> cells;
    std::vector<int> mults;
    std::vector<int> box(N, 0);
    Eigen::MatrixXd P(N + 1, N);
    for (;;) {
        if (inside(box)) {
            int base = 0;
            for (int d = 0; d < N; ++d)
                base += box[d] * stride[d];
            for (const auto& p : perms) {
                std::vector<int> cell{base};
                int cur = base;
                for (int d : p) {
                    cur += stride[d];
                    cell.push_back(cur);
                }
                for (int r = 0; r <= N; ++r)
                    P.row(r) = V.row(cell[r]);
                mults.push_back(edge_matrix(P).determinant() > 0 ? 1 : -1);
                cells.push_back(std::move(cell));
            }
        }
        int d = 0;
        while (d < N && ++box[d] == npts[d] - 1)
            box[d++] = 0;
        if (d == N)
            break;
    }
    return compact_vertices(from_lists(std::move(V), N, cells, mults));
}

}  // namespace currentlab
