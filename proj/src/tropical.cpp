#include "maxtrust/tropical.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace maxtrust {

Tropical inverse(Tropical x) {
    if (x.is_eps()) throw DomainError("eps has no max-plus inverse");
    return Tropical{-x.value()};
}

bool approx_equal(Tropical a, Tropical b, double tol) {
    if (a.is_eps() || b.is_eps()) return a.is_eps() && b.is_eps();
    return std::abs(a.value() - b.value()) <= tol;
}

std::string format_scalar(Tropical x) {
    if (x.is_eps()) return "eps";
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x.value(), std::chars_format::general, 17);
    return {buf, end};
}

std::string to_string(Tropical x) { return format_scalar(x); }

std::ostream& operator<<(std::ostream& os, Tropical x) { return os << format_scalar(x); }

Tropical parse_scalar(const std::string& token) {
    if (token == "eps") return eps;
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ParseError("invalid matrix entry '" + token + "'", 0, 0);
    }
    return Tropical{v};
}

bool is_admissible_eigenvector(std::span<const Tropical> v) {
    return std::any_of(v.begin(), v.end(), [](Tropical x) { return x.is_finite(); });
}

bool all_finite(std::span<const Tropical> v) {
    return std::all_of(v.begin(), v.end(), [](Tropical x) { return x.is_finite(); });
}

TropicalVector vec_oplus(std::span<const Tropical> a, std::span<const Tropical> b) {
    if (a.size() != b.size()) throw ShapeError("vec_oplus: length mismatch");
    TropicalVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = oplus(a[i], b[i]);
    return out;
}

TropicalVector vec_shift(std::span<const Tropical> v, Tropical a) {
    TropicalVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = otimes(v[i], a);
    return out;
}

Tropical vec_max(std::span<const Tropical> v) {
    Tropical m = eps;
    for (auto x : v) m = oplus(m, x);
    return m;
}

TropicalMatrix::TropicalMatrix(std::size_t rows, std::size_t cols, Tropical fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

TropicalMatrix::TropicalMatrix(std::initializer_list<std::initializer_list<Tropical>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ShapeError("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

TropicalMatrix TropicalMatrix::identity(std::size_t n) {
    TropicalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Tropical::e();
    return m;
}

TropicalMatrix mat_mul(const TropicalMatrix& a, const TropicalMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("mat_mul: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + " differ");
    }
    TropicalMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Tropical aik = a(i, k);
            if (aik.is_eps()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) = oplus(out(i, j), otimes(aik, b(k, j)));
            }
        }
    }
    return out;
}

TropicalVector mat_vec(const TropicalMatrix& a, std::span<const Tropical> x) {
    if (a.cols() != x.size()) throw ShapeError("mat_vec: length mismatch");
    TropicalVector out(a.rows(), eps);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Tropical acc = eps;
        for (std::size_t j = 0; j < a.cols(); ++j) acc = oplus(acc, otimes(a(i, j), x[j]));
        out[i] = acc;
    }
    return out;
}

TropicalMatrix mat_oplus(const TropicalMatrix& a, const TropicalMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("mat_oplus: shape mismatch");
    TropicalMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = oplus(a(i, j), b(i, j));
    return out;
}

TropicalMatrix mat_pow(const TropicalMatrix& a, unsigned k) {
    if (!a.square()) throw ShapeError("mat_pow: matrix is not square");
    TropicalMatrix out = TropicalMatrix::identity(a.rows());
    for (unsigned i = 0; i < k; ++i) out = mat_mul(a, out);
    return out;
}

TropicalMatrix transpose(const TropicalMatrix& a) {
    TropicalMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Tropical trace(const TropicalMatrix& a) {
    if (!a.square()) throw ShapeError("trace: matrix is not square");
    Tropical t = eps;
    for (std::size_t i = 0; i < a.rows(); ++i) t = oplus(t, a(i, i));
    return t;
}

TropicalMatrix shifted(const TropicalMatrix& a, double s) {
    TropicalMatrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = otimes(a(i, j), Tropical{s});
    return out;
}

TropicalMatrix submatrix(const TropicalMatrix& a, std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols) {
    TropicalMatrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
    return out;
}

bool approx_equal(const TropicalMatrix& a, const TropicalMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!approx_equal(a(i, j), b(i, j), tol)) return false;
    return true;
}

namespace {

struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    // Next non-blank, non-comment line split into tokens with 1-based columns.
    bool next(std::vector<std::pair<std::string, std::size_t>>& tokens) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            tokens.clear();
            std::size_t i = 0;
            while (i < line.size()) {
                while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
                if (i >= line.size()) break;
                std::size_t start = i;
                while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
                tokens.emplace_back(line.substr(start, i - start), start + 1);
            }
            if (tokens.empty() || tokens.front().first[0] == '#') continue;
            return true;
        }
        return false;
    }
};

std::size_t parse_dim(const std::pair<std::string, std::size_t>& tok, std::size_t line) {
    std::size_t v = 0;
    const auto& s = tok.first;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("expected a non-negative integer dimension, got '" + s + "'", line, tok.second);
    }
    return v;
}

}  // namespace

TropicalMatrix read_matrix(std::istream& in) {
    LineReader reader{in};
    std::vector<std::pair<std::string, std::size_t>> tokens;
    if (!reader.next(tokens)) throw ParseError("empty matrix input", 1, 1);
    if (tokens.size() != 2) {
        throw ParseError("header must be 'rows cols'", reader.line_no, tokens.front().second);
    }
    const std::size_t n = parse_dim(tokens[0], reader.line_no);
    const std::size_t m = parse_dim(tokens[1], reader.line_no);
    TropicalMatrix a(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (!reader.next(tokens)) {
            throw ParseError("expected " + std::to_string(n) + " rows, found " + std::to_string(i),
                             reader.line_no + 1, 1);
        }
        if (tokens.size() != m) {
            const std::size_t col = tokens.size() > m ? tokens[m].second : tokens.back().second;
            throw ParseError("expected " + std::to_string(m) + " entries, found " +
                                 std::to_string(tokens.size()),
                             reader.line_no, col);
        }
        for (std::size_t j = 0; j < m; ++j) {
            try {
                a(i, j) = parse_scalar(tokens[j].first);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), reader.line_no, tokens[j].second);
            }
        }
    }
    if (reader.next(tokens)) {
        throw ParseError("trailing content after matrix", reader.line_no, tokens.front().second);
    }
    return a;
}

TropicalMatrix parse_matrix(const std::string& text) {
    std::istringstream in(text);
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const TropicalMatrix& a) {
    out << a.rows() << ' ' << a.cols() << '\n';
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j) out << ' ';
            out << format_scalar(a(i, j));
        }
        out << '\n';
    }
}

std::string format_matrix(const TropicalMatrix& a) {
    std::ostringstream out;
    write_matrix(out, a);
    return out.str();
}

TropicalMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix file '" + path + "'");
    return read_matrix(in);
}

void save_matrix(const std::string& path, const TropicalMatrix& a) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write matrix file '" + path + "'");
    write_matrix(out, a);
}

}  // namespace maxtrust
