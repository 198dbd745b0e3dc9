#include "currentlab/current.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace currentlab {

namespace {

// Spatial hash on a 1e-9 lattice; lookups scan the neighbouring bins so that
// points within kVertexTolerance are always found.
class VertexHash {
public:
    explicit VertexHash(int dim) : dim_(dim) {}

    void insert(const Eigen::RowVectorXd& p, int index) { bins_[key(p)].push_back(index); }

    int find(const Vertices& store, const Eigen::RowVectorXd& p) const
    {
        const std::vector<long long> base = key(p);
        std::vector<long long> probe = base;
        const int count = static_cast<int>(std::pow(3, dim_));
        for (int code = 0; code < count; ++code) {
            int c = code;
            for (int d = 0; d < dim_; ++d) {
                probe[d] = base[d] + (c % 3) - 1;
                c /= 3;
            }
            const auto it = bins_.find(probe);
            if (it == bins_.end())
                continue;
            for (int idx : it->second)
                if ((store.row(idx) - p).cwiseAbs().maxCoeff() <= kVertexTolerance)
                    return idx;
        }
        return -1;
    }

private:
    struct KeyHash {
        std::size_t operator()(const std::vector<long long>& k) const
        {
            std::size_t h = 1469598103934665603ull;
            for (long long v : k)
                h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
            return h;
        }
    };

    std::vector<long long> key(const Eigen::RowVectorXd& p) const
    {
        std::vector<long long> k(dim_);
        for (int d = 0; d < dim_; ++d)
            k[d] = std::llround(std::floor(p(d) * 1e9));
        return k;
    }

    int dim_;
    std::unordered_map<std::vector<long long>, std::vector<int>, KeyHash> bins_;
};

// Sorts `v` ascending and returns the parity of the permutation (+1/-1).
int sort_with_parity(int* v, int n)
{
    int sign = 1;
    for (int i = 1; i < n; ++i)
        for (int j = i; j > 0 && v[j - 1] > v[j]; --j) {
            std::swap(v[j - 1], v[j]);
            sign = -sign;
        }
    return sign;
}

const std::string kEuclidean;

}  // namespace

SimplicialCurrent::SimplicialCurrent(Vertices vertices, int dim, const Cells& cells,
                                     const Multiplicities& mults,
                                     const std::vector<std::string>& tags)
    : vertices_(std::move(vertices)), dim_(dim)
{
    const int N = ambient_dim();
    if (dim < 0 || dim > N)
        throw Error("current dimension " + std::to_string(dim) + " not in [0, " +
                    std::to_string(N) + "]");
    if (!vertices_.allFinite())
        throw Error("non-finite vertex coordinate");
    const Eigen::Index C = cells.rows();
    if (C > 0 && cells.cols() != dim + 1)
        throw Error("cells must have dim+1 vertices");
    if (mults.size() != C)
        throw Error("multiplicities not aligned with cells");
    if (!tags.empty() && static_cast<Eigen::Index>(tags.size()) != C)
        throw Error("norm tags not aligned with cells");

    const int w = dim + 1;
    std::vector<int> sorted(static_cast<std::size_t>(C) * w);
    std::vector<int> signed_mult(C);
    for (Eigen::Index c = 0; c < C; ++c) {
        int* row = &sorted[c * w];
        for (int j = 0; j < w; ++j) {
            const int v = cells(c, j);
            if (v < 0 || v >= vertices_.rows())
                throw Error("cell " + std::to_string(c) + " references vertex " +
                            std::to_string(v) + " out of range");
            row[j] = v;
        }
        signed_mult[c] = sort_with_parity(row, w) * mults(c);
        for (int j = 1; j < w; ++j)
            if (row[j] == row[j - 1])
                throw Error("cell " + std::to_string(c) + " repeats a vertex");
    }

    std::vector<Eigen::Index> order(C);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::lexicographical_compare(&sorted[a * w], &sorted[a * w] + w, &sorted[b * w],
                                            &sorted[b * w] + w);
    });

    std::vector<Eigen::Index> keep;
    std::vector<int> keep_mult;
    std::vector<std::string> keep_tags;
    for (Eigen::Index i = 0; i < C;) {
        const Eigen::Index first = order[i];
        long long total = 0;
        const std::string& t0 = tags.empty() ? kEuclidean : tags[first];
        Eigen::Index j = i;
        for (; j < C && std::equal(&sorted[first * w], &sorted[first * w] + w,
                                   &sorted[order[j] * w]);
             ++j) {
            total += signed_mult[order[j]];
            if (!tags.empty() && tags[order[j]] != t0)
                throw Error("conflicting norm tags on one cell");
        }
        if (total != 0) {
            keep.push_back(first);
            keep_mult.push_back(static_cast<int>(total));
            keep_tags.push_back(t0);
        }
        i = j;
    }

    cells_.resize(static_cast<Eigen::Index>(keep.size()), w);
    mults_.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
        for (int j = 0; j < w; ++j)
            cells_(r, j) = sorted[keep[r] * w + j];
        mults_(r) = keep_mult[r];
    }
    if (std::any_of(keep_tags.begin(), keep_tags.end(), [](const auto& s) { return !s.empty(); }))
        tags_ = std::move(keep_tags);

    for (Eigen::Index c = 0; c < cells_.rows(); ++c)
        if (is_degenerate(cell_points(c)))
            throw Error("degenerate cell " + std::to_string(c));
}

SimplicialCurrent SimplicialCurrent::zero(Vertices vertices, int dim)
{
    return SimplicialCurrent(std::move(vertices), dim, Cells(0, dim + 1), Multiplicities(0));
}

const std::string& SimplicialCurrent::tag(Eigen::Index c) const
{
    return tags_.empty() ? kEuclidean : tags_[c];
}

Eigen::MatrixXd SimplicialCurrent::cell_points(Eigen::Index c) const
{
    Eigen::MatrixXd P(dim_ + 1, ambient_dim());
    for (int j = 0; j <= dim_; ++j)
        P.row(j) = vertices_.row(cells_(c, j));
    return P;
}

std::vector<bool> SimplicialCurrent::active_vertices() const
{
    std::vector<bool> active(vertices_.rows(), false);
    for (Eigen::Index c = 0; c < cells_.rows(); ++c)
        for (int j = 0; j <= dim_; ++j)
            active[cells_(c, j)] = true;
    return active;
}

SimplicialCurrent boundary(const SimplicialCurrent& T)
{
    const int k = T.dim();
    if (k == 0)
        throw Error("no boundary for 0-currents");
    const Eigen::Index C = T.num_cells();
    Cells faces(C * (k + 1), k);
    Multiplicities mult(C * (k + 1));
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < C; ++c)
        for (int i = 0; i <= k; ++i, ++r) {
            for (int j = 0, col = 0; j <= k; ++j)
                if (j != i)
                    faces(r, col++) = T.cells()(c, j);
            mult(r) = (i % 2 == 0 ? 1 : -1) * T.mults()(c);
        }
    return SimplicialCurrent(T.vertices(), k - 1, faces, mult);
}

double mass(const SimplicialCurrent& T)
{
    double m = 0.0;
    for (Eigen::Index c = 0; c < T.num_cells(); ++c)
        m += std::abs(T.mults()(c)) * T.cell_volume(c);
    return m;
}

std::vector<int> match_vertices(const Vertices& reference, const Vertices& points)
{
    if (reference.cols() != points.cols())
        throw Error("ambient dimension mismatch");
    VertexHash hash(static_cast<int>(reference.cols()));
    for (Eigen::Index i = 0; i < reference.rows(); ++i)
        hash.insert(reference.row(i), static_cast<int>(i));
    std::vector<int> map(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        map[i] = hash.find(reference, points.row(i));
    return map;
}

SimplicialCurrent add(const SimplicialCurrent& T1, const SimplicialCurrent& T2)
{
    if (T1.ambient_dim() != T2.ambient_dim())
        throw Error("ambient dimension mismatch in chain sum");
    if (T1.dim() != T2.dim())
        throw Error("dimension mismatch in chain sum: " + std::to_string(T1.dim()) + " vs " +
                    std::to_string(T2.dim()));
    const int w = T1.dim() + 1;

    Vertices V;
    std::vector<int> map2(T2.num_vertices());
    const bool same = T1.vertices().rows() == T2.vertices().rows() &&
                      T1.vertices() == T2.vertices();
    if (same) {
        V = T1.vertices();
        std::iota(map2.begin(), map2.end(), 0);
    } else {
        const int N = T1.ambient_dim();
        VertexHash hash(N);
        std::vector<Eigen::RowVectorXd> extra;
        for (Eigen::Index i = 0; i < T1.num_vertices(); ++i)
            hash.insert(T1.vertices().row(i), static_cast<int>(i));
        Vertices grown = T1.vertices();
        grown.conservativeResize(T1.num_vertices() + T2.num_vertices(), N);
        Eigen::Index next = T1.num_vertices();
        for (Eigen::Index i = 0; i < T2.num_vertices(); ++i) {
            const Eigen::RowVectorXd p = T2.vertices().row(i);
            int idx = hash.find(grown, p);
            if (idx < 0) {
                idx = static_cast<int>(next++);
                grown.row(idx) = p;
                hash.insert(p, idx);
            }
            map2[i] = idx;
        }
        V = grown.topRows(next);
    }

    const Eigen::Index C1 = T1.num_cells(), C2 = T2.num_cells();
    Cells cells(C1 + C2, w);
    Multiplicities mult(C1 + C2);
    cells.topRows(C1) = T1.cells();
    mult.head(C1) = T1.mults();
    for (Eigen::Index c = 0; c < C2; ++c)
        for (int j = 0; j < w; ++j)
            cells(C1 + c, j) = map2[T2.cells()(c, j)];
    mult.tail(C2) = T2.mults();

    std::vector<std::string> tags;
    if (T1.has_tags() || T2.has_tags()) {
        tags.resize(C1 + C2);
        for (Eigen::Index c = 0; c < C1; ++c)
            tags[c] = T1.tag(c);
        for (Eigen::Index c = 0; c < C2; ++c)
            tags[C1 + c] = T2.tag(c);
    }
    return SimplicialCurrent(std::move(V), T1.dim(), cells, mult, tags);
}

SimplicialCurrent scale(const SimplicialCurrent& T, int s)
{
    return SimplicialCurrent(T.vertices(), T.dim(), T.cells(), T.mults() * s, T.tags());
}

bool same_chain(const SimplicialCurrent& T1, const SimplicialCurrent& T2)
{
    return (T1 - T2).is_zero();
}

PushForwardResult push_forward_affine(const SimplicialCurrent& T, const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& b)
{
    if (A.cols() != T.ambient_dim() || A.rows() != b.size())
        throw Error("affine map shape does not match the current");
    if (T.dim() > A.rows())
        throw Error("target space too small for the current's dimension");
    Vertices V = (T.vertices() * A.transpose()).rowwise() + b.transpose();

    PushForwardResult result;
    std::vector<Eigen::Index> keep;
    Eigen::MatrixXd P(T.dim() + 1, A.rows());
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        for (int j = 0; j <= T.dim(); ++j)
            P.row(j) = V.row(T.cells()(c, j));
        if (is_degenerate(P))
            ++result.dropped_cells;
        else
            keep.push_back(c);
    }
    Cells cells(static_cast<Eigen::Index>(keep.size()), T.dim() + 1);
    Multiplicities mult(static_cast<Eigen::Index>(keep.size()));
    std::vector<std::string> tags;
    for (std::size_t r = 0; r < keep.size(); ++r) {
        cells.row(r) = T.cells().row(keep[r]);
        mult(r) = T.mults()(keep[r]);
        if (T.has_tags())
            tags.push_back(T.tag(keep[r]));
    }
    result.current = SimplicialCurrent(std::move(V), T.dim(), cells, mult, tags);
    return result;
}

SimplicialCurrent compact_vertices(const SimplicialCurrent& T)
{
    const auto active = T.active_vertices();
    std::vector<int> remap(T.num_vertices(), -1);
    int next = 0;
    for (Eigen::Index i = 0; i < T.num_vertices(); ++i)
        if (active[i])
            remap[i] = next++;
    Vertices V(next, T.ambient_dim());
    for (Eigen::Index i = 0; i < T.num_vertices(); ++i)
        if (active[i])
            V.row(remap[i]) = T.vertices().row(i);
    Cells cells = T.cells();
    for (Eigen::Index c = 0; c < cells.rows(); ++c)
        for (Eigen::Index j = 0; j < cells.cols(); ++j)
            cells(c, j) = remap[cells(c, j)];
    return SimplicialCurrent(std::move(V), T.dim(), cells, T.mults(), T.tags());
}

SimplicialCurrent weld_vertices(const SimplicialCurrent& T)
{
    const int N = T.ambient_dim();
    VertexHash hash(N);
    Vertices V(T.num_vertices(), N);
    std::vector<int> remap(T.num_vertices());
    int next = 0;
    for (Eigen::Index i = 0; i < T.num_vertices(); ++i) {
        const Eigen::RowVectorXd p = T.vertices().row(i);
        int idx = hash.find(V, p);
        if (idx < 0) {
            idx = next++;
            V.row(idx) = p;
            hash.insert(p, idx);
        }
        remap[i] = idx;
    }
    Cells cells = T.cells();
    for (Eigen::Index c = 0; c < cells.rows(); ++c)
        for (Eigen::Index j = 0; j < cells.cols(); ++j)
            cells(c, j) = remap[cells(c, j)];
    return SimplicialCurrent(V.topRows(next), T.dim(), cells, T.mults(), T.tags());
}

}  // namespace currentlab
