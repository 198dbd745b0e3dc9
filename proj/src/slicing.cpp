#include "currentlab/slicing.hpp"

#include <map>
#include <sstream>

namespace currentlab {

AffineFunctional AffineFunctional::parse(const std::string& text, int ambient_dim)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        v.push_back(std::stod(item));
    if (static_cast<int>(v.size()) != ambient_dim + 1)
        throw Error("affine functional needs " + std::to_string(ambient_dim + 1) +
                    " comma-separated numbers (gradient then offset)");
    AffineFunctional w;
    w.gradient = Eigen::Map<Eigen::VectorXd>(v.data(), ambient_dim);
    w.offset = v.back();
    return w;
}

namespace {

enum class ClipOutput { kKeptPart, kSection };

SimplicialCurrent clip(const SimplicialCurrent& T, const AffineFunctional& w, double t,
                       ClipOutput output)
{
    if (w.gradient.size() != T.ambient_dim())
        throw Error("affine functional dimension mismatch");
    const int k = T.dim();
    const int N = T.ambient_dim();
    if (output == ClipOutput::kSection && k == 0)
        throw Error("cannot slice a 0-current");

    Eigen::VectorXd level(T.num_vertices());
    const auto active = T.active_vertices();
    for (Eigen::Index i = 0; i < T.num_vertices(); ++i) {
        level(i) = w(T.vertices().row(i)) - t;
        if (active[i] && std::abs(level(i)) <= kSliceGenericity)
            throw Error("slice through vertex " + std::to_string(i));
    }

    const bool keep_originals = output == ClipOutput::kKeptPart;
    std::vector<Eigen::RowVectorXd> points;
    if (keep_originals)
        for (Eigen::Index i = 0; i < T.num_vertices(); ++i)
            points.push_back(T.vertices().row(i));
    std::map<std::pair<int, int>, int> cut_ids;
    auto cut_point = [&](int u, int v) {
        const int lo = std::min(u, v), hi = std::max(u, v);
        auto [it, inserted] = cut_ids.try_emplace({lo, hi}, static_cast<int>(points.size()));
        if (inserted) {
            const double s = level(lo) / (level(lo) - level(hi));
            points.push_back(T.vertices().row(lo) +
                             s * (T.vertices().row(hi) - T.vertices().row(lo)));
        }
        return it->second;
    };

    std::vector<std::vector<int>> out_cells;
    std::vector<int> out_mult;
    std::vector<std::string> out_tags;
    Eigen::VectorXd a(k + 1);
    Eigen::MatrixXd piece_points(k + 1, N);
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        for (int j = 0; j <= k; ++j)
            a(j) = level(T.cells()(c, j));
        const auto pieces = clip_below(a);
        if (pieces.empty())
            continue;
        const Eigen::MatrixXd P = T.cell_points(c);
        for (const auto& piece : pieces) {
            std::vector<int> ids(k + 1);
            std::vector<bool> on_plane(k + 1);
            for (int r = 0; r <= k; ++r) {
                const int u = T.cells()(c, piece[r].a), v = T.cells()(c, piece[r].b);
                on_plane[r] = piece[r].is_cut();
                ids[r] = on_plane[r] ? cut_point(u, v) : u;
                piece_points.row(r) = points.empty() || !on_plane[r]
                                          ? Eigen::RowVectorXd(T.vertices().row(u))
                                          : points[ids[r]];
            }
            if (is_degenerate(piece_points))
                continue;
            const int sign = relative_orientation(P, piece_points) * T.mults()(c);
            if (output == ClipOutput::kKeptPart) {
                out_cells.push_back(ids);
                out_mult.push_back(sign);
                out_tags.push_back(T.tag(c));
                continue;
            }
            for (int i = 0; i <= k; ++i) {
                bool face_on_plane = true;
                std::vector<int> face;
                for (int r = 0; r <= k; ++r)
                    if (r != i) {
                        face_on_plane = face_on_plane && on_plane[r];
                        face.push_back(ids[r]);
                    }
                if (!face_on_plane)
                    continue;
                out_cells.push_back(face);
                out_mult.push_back(i % 2 == 0 ? sign : -sign);
            }
        }
    }

    const int out_dim = output == ClipOutput::kKeptPart ? k : k - 1;
    Vertices V(static_cast<Eigen::Index>(points.size()), N);
    for (std::size_t i = 0; i < points.size(); ++i)
        V.row(i) = points[i];
    Cells cells(static_cast<Eigen::Index>(out_cells.size()), out_dim + 1);
    Multiplicities mult(static_cast<Eigen::Index>(out_cells.size()));
    for (std::size_t r = 0; r < out_cells.size(); ++r) {
        for (int j = 0; j <= out_dim; ++j)
            cells(r, j) = out_cells[r][j];
        mult(r) = out_mult[r];
    }
    if (!T.has_tags())
        out_tags.clear();
    return SimplicialCurrent(std::move(V), out_dim, cells, mult, out_tags);
}

}  // namespace

SimplicialCurrent restrict_below(const SimplicialCurrent& T, const AffineFunctional& w, double t)
{
    return clip(T, w, t, ClipOutput::kKeptPart);
}

SimplicialCurrent slice_by_affine(const SimplicialCurrent& T, const AffineFunctional& w, double t)
{
    return clip(T, w, t, ClipOutput::kSection);
}

}  // namespace currentlab
