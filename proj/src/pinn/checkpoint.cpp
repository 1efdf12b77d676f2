#include "pinnfem/pinn/checkpoint.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pinnfem/common/errors.hpp"

namespace pinnfem::pinn {

namespace {

void put(std::ostream& out, double v)
{
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, r.ptr - buf);
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::string next()
    {
        std::string s;
        if (!std::getline(in_, s)) throw FormatError("unexpected end of file", line_ + 1);
        ++line_;
        if (!s.empty() && s.back() == '\r') s.pop_back();
        return s;
    }

    [[nodiscard]] int line() const noexcept { return line_; }

private:
    std::istream& in_;
    int line_ = 0;
};

std::vector<std::string> split(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

double parse_double(const std::string& t, int line)
{
    double v = 0.0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw FormatError("bad number '" + t + "'", line);
    if (!std::isfinite(v)) throw FormatError("non-finite value", line);
    return v;
}

int parse_int(const std::string& t, int line)
{
    int v = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw FormatError("bad integer '" + t + "'", line);
    return v;
}

std::vector<std::string> keyed(LineReader& r, const std::string& key)
{
    auto tok = split(r.next());
    if (tok.empty() || tok.front() != key) throw FormatError("expected '" + key + "'", r.line());
    tok.erase(tok.begin());
    return tok;
}

std::vector<double> row(LineReader& r, int count)
{
    const auto tok = split(r.next());
    if (static_cast<int>(tok.size()) != count) {
        throw FormatError("expected " + std::to_string(count) + " values, found " + std::to_string(tok.size()),
                          r.line());
    }
    std::vector<double> v;
    v.reserve(tok.size());
    for (const auto& t : tok) v.push_back(parse_double(t, r.line()));
    return v;
}

} // namespace

void write_checkpoint(const ad::DenseNetwork& net, std::ostream& out)
{
    const auto& sizes = net.layer_sizes();
    out << "PINNFEM-NET v1\n";
    out << "dim " << net.input_dim() << '\n';
    out << "layers";
    for (int n : sizes) out << ' ' << n;
    out << "\nactivation tanh\n";
    out << "boundary " << (net.boundary_mode == ad::BoundaryMode::dirichlet_product ? "dirichlet_product" : "none")
        << '\n';
    out << "shift ";
    put(out, net.shift);
    out << '\n';
    for (int l = 0; l < net.depth(); ++l) {
        const auto w = net.weights(l);
        out << 'W' << l + 1 << '\n';
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                if (j) out << ' ';
                put(out, w(i, j));
            }
            out << '\n';
        }
        const auto b = net.bias(l);
        out << 'b' << l + 1 << '\n';
        for (Eigen::Index i = 0; i < b.size(); ++i) {
            if (i) out << ' ';
            put(out, b(i));
        }
        out << '\n';
    }
}

ad::DenseNetwork read_checkpoint(std::istream& in)
{
    LineReader r(in);
    if (r.next() != "PINNFEM-NET v1") throw FormatError("missing 'PINNFEM-NET v1' header", r.line());
    const auto dt = keyed(r, "dim");
    if (dt.size() != 1) throw FormatError("expected one dimension", r.line());
    const int dim = parse_int(dt[0], r.line());
    if (dim < 1 || dim > 3) throw FormatError("dimension must be 1, 2 or 3", r.line());

    std::vector<int> sizes;
    for (const auto& t : keyed(r, "layers")) {
        const int n = parse_int(t, r.line());
        if (n < 1) throw FormatError("layer sizes must be positive", r.line());
        sizes.push_back(n);
    }
    if (sizes.size() < 2 || sizes.front() != dim || sizes.back() != 1) {
        throw FormatError("layers must run from the dimension to 1", r.line());
    }
    const auto act = keyed(r, "activation");
    if (act.size() != 1 || act[0] != "tanh") throw FormatError("unsupported activation", r.line());

    ad::DenseNetwork net(sizes);
    const auto bm = keyed(r, "boundary");
    if (bm.size() == 1 && bm[0] == "none") {
        net.boundary_mode = ad::BoundaryMode::none;
    } else if (bm.size() == 1 && bm[0] == "dirichlet_product") {
        net.boundary_mode = ad::BoundaryMode::dirichlet_product;
    } else {
        throw FormatError("boundary must be none or dirichlet_product", r.line());
    }
    const auto sh = keyed(r, "shift");
    if (sh.size() != 1) throw FormatError("expected one shift value", r.line());
    net.shift = parse_double(sh[0], r.line());

    for (int l = 0; l < net.depth(); ++l) {
        const int rows = sizes[static_cast<std::size_t>(l + 1)];
        const int cols = sizes[static_cast<std::size_t>(l)];
        if (r.next() != "W" + std::to_string(l + 1)) {
            throw FormatError("expected 'W" + std::to_string(l + 1) + "'", r.line());
        }
        auto w = net.weights(l);
        for (int i = 0; i < rows; ++i) {
            const auto v = row(r, cols);
            for (int j = 0; j < cols; ++j) w(i, j) = v[static_cast<std::size_t>(j)];
        }
        if (r.next() != "b" + std::to_string(l + 1)) {
            throw FormatError("expected 'b" + std::to_string(l + 1) + "'", r.line());
        }
        auto b = net.bias(l);
        const auto v = row(r, rows);
        for (int i = 0; i < rows; ++i) b(i) = v[static_cast<std::size_t>(i)];
    }
    std::string rest;
    while (std::getline(in, rest)) {
        if (!split(rest).empty()) throw FormatError("trailing content", r.line() + 1);
    }
    return net;
}

void save_checkpoint(const ad::DenseNetwork& net, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    write_checkpoint(net, out);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

ad::DenseNetwork load_checkpoint(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    try {
        return read_checkpoint(in);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2),
                          e.line());
    }
}

} // namespace pinnfem::pinn
