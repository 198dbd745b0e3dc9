#include "currentlab/simplex_geometry.hpp"

namespace currentlab {

namespace {

void staircase_paths(int i, int j, int a, int b, const std::vector<int>& kept,
                     const std::vector<int>& dropped, std::vector<ClipVertex>& path,
                     std::vector<std::vector<ClipVertex>>& out)
{
    path.push_back(j == 0 ? ClipVertex{kept[i], kept[i]} : ClipVertex{kept[i], dropped[j - 1]});
    if (i == a && j == b) {
        out.push_back(path);
    } else {
        if (i < a)
            staircase_paths(i + 1, j, a, b, kept, dropped, path, out);
        if (j < b)
            staircase_paths(i, j + 1, a, b, kept, dropped, path, out);
    }
    path.pop_back();
}

}  // namespace

std::vector<std::vector<ClipVertex>> clip_below(const Eigen::VectorXd& values)
{
    std::vector<int> kept, dropped;
    for (int i = 0; i < values.size(); ++i)
        (values(i) < 0 ? kept : dropped).push_back(i);

    std::vector<std::vector<ClipVertex>> out;
    if (kept.empty())
        return out;
    std::vector<ClipVertex> path;
    staircase_paths(0, 0, static_cast<int>(kept.size()) - 1, static_cast<int>(dropped.size()),
                    kept, dropped, path, out);
    return out;
}

double integral_positive_part(const Eigen::MatrixXd& P, const Eigen::VectorXd& values)
{
    const auto pieces = clip_below(-values);
    double total = 0.0;
    Eigen::MatrixXd Q(P.rows(), P.cols());
    for (const auto& piece : pieces) {
        double sum = 0.0;
        for (std::size_t r = 0; r < piece.size(); ++r) {
            const auto [a, b] = piece[r];
            if (a == b) {
                Q.row(r) = P.row(a);
                sum += values(a);
            } else {
                const double s = values(a) / (values(a) - values(b));
                Q.row(r) = P.row(a) + s * (P.row(b) - P.row(a));
            }
        }
        total += simplex_volume(Q) * sum / static_cast<double>(piece.size());
    }
    return total;
}

}  // namespace currentlab
