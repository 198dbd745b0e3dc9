#include "currentlab/curve_decomposition.hpp"

#include <algorithm>
#include <map>

namespace currentlab {

namespace {

struct UnitEdge {
    int tail, head;
    double length;
};

class Walker {
public:
    explicit Walker(const SimplicialCurrent& T)
    {
        const Eigen::Index nv = T.num_vertices();
        out_.assign(nv, {});
        balance_.assign(nv, 0);
        for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
            int a = T.cells()(c, 0), b = T.cells()(c, 1);
            const int m = T.mults()(c);
            if (m < 0)
                std::swap(a, b);
            const double len = T.cell_volume(c);
            for (int r = 0; r < std::abs(m); ++r) {
                out_[a].push_back(static_cast<int>(edges_.size()));
                edges_.push_back({a, b, len});
                --balance_[a];
                ++balance_[b];
            }
        }
        // Lowest head first, so ties follow vertex order.
        for (auto& list : out_)
            std::stable_sort(list.begin(), list.end(),
                             [&](int e, int f) { return edges_[e].head < edges_[f].head; });
        next_.assign(nv, 0);
    }

    const std::vector<int>& balance() const { return balance_; }

    bool has_out(int v) const { return next_[v] < out_[v].size(); }

    // Follows unused edges from `start` until stuck.
    std::vector<int> walk(int start)
    {
        std::vector<int> path{start};
        int v = start;
        while (has_out(v)) {
            const UnitEdge& e = edges_[out_[v][next_[v]++]];
            v = e.head;
            path.push_back(v);
        }
        return path;
    }

    double length_of(const std::vector<int>& path) const
    {
        // All parallel edges between two vertices have the same length.
        double L = 0.0;
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            L += edge_length(path[i], path[i + 1]);
        return L;
    }

private:
    double edge_length(int a, int b) const
    {
        for (int e : out_[a])
            if (edges_[e].head == b)
                return edges_[e].length;
        return 0.0;
    }

    std::vector<UnitEdge> edges_;
    std::vector<std::vector<int>> out_;
    std::vector<std::size_t> next_;
    std::vector<int> balance_;
};

// Splits every closed sub-walk off a walk. The residue is returned in place.
void split_loops(std::vector<int>& walk, std::vector<std::vector<int>>& loops)
{
    std::vector<int> stack;
    std::map<int, std::size_t> position;
    for (int v : walk) {
        const auto it = position.find(v);
        if (it == position.end()) {
            position[v] = stack.size();
            stack.push_back(v);
            continue;
        }
        std::vector<int> loop(stack.begin() + static_cast<std::ptrdiff_t>(it->second), stack.end());
        loop.push_back(v);
        loops.push_back(std::move(loop));
        for (std::size_t i = it->second + 1; i < stack.size(); ++i)
            position.erase(stack[i]);
        stack.resize(it->second + 1);
    }
    walk = std::move(stack);
}

}  // namespace

int CurveDecomposition::open_count() const
{
    return static_cast<int>(std::count_if(curves.begin(), curves.end(),
                                          [](const Curve& c) { return !c.closed; }));
}

CurveDecomposition decompose(const SimplicialCurrent& T, bool simple)
{
    if (T.dim() != 1)
        throw Error("decomposition needs a 1-current");
    Walker W(T);
    long long total = 0;
    for (int b : W.balance())
        total += b;
    if (total != 0)
        throw Error("not a cycle-consistent chain");

    CurveDecomposition out;
    auto emit = [&](std::vector<int> walk, bool closed) {
        std::vector<std::vector<int>> loops;
        if (simple)
            split_loops(walk, loops);
        // A closed walk split into loops leaves a single vertex behind.
        if (walk.size() >= 2)
            out.curves.push_back({walk, closed, W.length_of(walk)});
        for (auto& l : loops)
            out.curves.push_back({l, true, W.length_of(l)});
    };

    std::vector<int> excess = W.balance();
    const int nv = static_cast<int>(excess.size());
    for (int v = 0; v < nv; ++v)
        while (excess[v] < 0) {
            auto path = W.walk(v);
            ++excess[v];
            --excess[path.back()];
            emit(std::move(path), false);
        }
    for (int v = 0; v < nv; ++v)
        while (W.has_out(v))
            emit(W.walk(v), true);
    return out;
}

SimplicialCurrent curve_chain(const SimplicialCurrent& T, const Curve& curve)
{
    const Eigen::Index n = static_cast<Eigen::Index>(curve.vertices.size()) - 1;
    Cells C(std::max<Eigen::Index>(n, 0), 2);
    for (Eigen::Index i = 0; i < n; ++i)
        C.row(i) << curve.vertices[i], curve.vertices[i + 1];
    return SimplicialCurrent(T.vertices(), 1, C, Multiplicities::Ones(C.rows()));
}

std::vector<std::pair<double, Eigen::VectorXd>> arc_length_parametrize(const Curve& curve,
                                                                       const SimplicialCurrent& T)
{
    std::vector<std::pair<double, Eigen::VectorXd>> out;
    double s = 0.0;
    for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
        const Eigen::VectorXd p = T.vertices().row(curve.vertices[i]).transpose();
        if (i > 0)
            s += (p - out.back().second).norm();
        out.emplace_back(s, p);
    }
    return out;
}

Eigen::VectorXd evaluate_curve(const std::vector<std::pair<double, Eigen::VectorXd>>& samples,
                               double s)
{
    if (samples.empty())
        throw Error("empty parametrization");
    if (s <= samples.front().first)
        return samples.front().second;
    if (s >= samples.back().first)
        return samples.back().second;
    const auto it = std::upper_bound(samples.begin(), samples.end(), s,
                                     [](double x, const auto& p) { return x < p.first; });
    const auto& [s1, p1] = *it;
    const auto& [s0, p0] = *(it - 1);
    const double lambda = s1 > s0 ? (s - s0) / (s1 - s0) : 0.0;
    return p0 + lambda * (p1 - p0);
}

}  // namespace currentlab
