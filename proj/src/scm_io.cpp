#include "currentlab/scm_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace currentlab {

namespace {

struct Line {
    int number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in)
{
    std::vector<Line> lines;
    std::string text;
    int number = 0;
    while (std::getline(in, text)) {
        ++number;
        if (const auto hash = text.find('#'); hash != std::string::npos)
            text.erase(hash);
        std::istringstream ss(text);
        Line line{number, {}};
        for (std::string tok; ss >> tok;)
            line.tokens.push_back(tok);
        if (!line.tokens.empty())
            lines.push_back(std::move(line));
    }
    return lines;
}

long long to_integer(const std::string& s, int line)
{
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + s + "'", line);
    }
    if (pos != s.size())
        throw ParseError("expected an integer, got '" + s + "'", line);
    return v;
}

double to_real(const std::string& s, int line)
{
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + s + "'", line);
    }
    if (pos != s.size())
        throw ParseError("expected a number, got '" + s + "'", line);
    return v;
}

long long header(const std::vector<Line>& lines, std::size_t& at, const std::string& key)
{
    if (at >= lines.size())
        throw ParseError("missing '" + key + "' header", lines.empty() ? 1 : lines.back().number);
    const Line& l = lines[at++];
    if (l.tokens.size() != 2 || l.tokens[0] != key)
        throw ParseError("malformed header, expected '" + key + " <n>'", l.number);
    const long long v = to_integer(l.tokens[1], l.number);
    if (v < 0)
        throw ParseError("negative count in '" + key + "'", l.number);
    return v;
}

}  // namespace

SimplicialCurrent read_scm(std::istream& in)
{
    const auto lines = tokenize(in);
    std::size_t at = 0;
    if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != "SCM" ||
        lines[0].tokens[1] != "1")
        throw ParseError("malformed header, expected 'SCM 1'", lines.empty() ? 1 : lines[0].number);
    ++at;
    const int N = static_cast<int>(header(lines, at, "ambient"));
    const int k = static_cast<int>(header(lines, at, "dim"));
    if (N < 1)
        throw ParseError("ambient dimension must be positive", lines[at - 2].number);
    if (k > N)
        throw ParseError("dim exceeds ambient dimension", lines[at - 1].number);
    const long long nv = header(lines, at, "vertices");
    Vertices V(nv, N);
    for (long long i = 0; i < nv; ++i, ++at) {
        if (at >= lines.size())
            throw ParseError("unexpected end of file in vertex block", lines.back().number);
        const Line& l = lines[at];
        if (static_cast<int>(l.tokens.size()) != N)
            throw ParseError("vertex needs " + std::to_string(N) + " coordinates", l.number);
        for (int d = 0; d < N; ++d) {
            V(i, d) = to_real(l.tokens[d], l.number);
            if (!std::isfinite(V(i, d)))
                throw ParseError("non-finite coordinate", l.number);
        }
    }
    const long long nc = header(lines, at, "simplices");
    Cells cells(nc, k + 1);
    Multiplicities mults(nc);
    std::vector<std::string> tags(nc);
    bool any_tag = false;
    for (long long c = 0; c < nc; ++c, ++at) {
        if (at >= lines.size())
            throw ParseError("unexpected end of file in simplex block", lines.back().number);
        const Line& l = lines[at];
        const std::size_t base = static_cast<std::size_t>(k) + 2;
        if (l.tokens.size() != base && l.tokens.size() != base + 2)
            throw ParseError("simplex line needs a multiplicity and " + std::to_string(k + 1) +
                                 " vertex indices",
                             l.number);
        const long long m = to_integer(l.tokens[0], l.number);
        if (m == 0)
            throw ParseError("zero multiplicity", l.number);
        mults(c) = static_cast<int>(m);
        for (int j = 0; j <= k; ++j) {
            const long long v = to_integer(l.tokens[1 + j], l.number);
            if (v < 0 || v >= nv)
                throw ParseError("vertex index " + std::to_string(v) + " out of range", l.number);
            cells(c, j) = static_cast<int>(v);
        }
        if (l.tokens.size() == base + 2) {
            if (l.tokens[base] != "norm")
                throw ParseError("expected 'norm <id>' after the vertex indices", l.number);
            tags[c] = l.tokens[base + 1];
            any_tag = true;
        }
    }
    if (at != lines.size())
        throw ParseError("trailing content after simplex block", lines[at].number);
    if (!any_tag)
        tags.clear();
    try {
        return SimplicialCurrent(std::move(V), k, cells, mults, tags);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(e.what(), lines.back().number);
    }
}

SimplicialCurrent read_scm(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    return read_scm(in);
}

void write_scm(const SimplicialCurrent& T, std::ostream& out)
{
    out << "SCM 1\n"
        << "ambient " << T.ambient_dim() << "\n"
        << "dim " << T.dim() << "\n"
        << "vertices " << T.num_vertices() << "\n";
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < T.num_vertices(); ++i) {
        for (int d = 0; d < T.ambient_dim(); ++d)
            out << (d ? " " : "") << T.vertices()(i, d);
        out << "\n";
    }
    out << "simplices " << T.num_cells() << "\n";
    for (Eigen::Index c = 0; c < T.num_cells(); ++c) {
        out << T.mults()(c);
        for (int j = 0; j <= T.dim(); ++j)
            out << " " << T.cells()(c, j);
        if (!T.tag(c).empty())
            out << " norm " << T.tag(c);
        out << "\n";
    }
}

void write_scm(const SimplicialCurrent& T, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path + "'");
    write_scm(T, out);
}

}  // namespace currentlab
