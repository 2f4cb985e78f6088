#include "panelfact/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "panelfact/errors.hpp"

namespace panelfact {

namespace {

constexpr std::string_view kBanner = "%%MatrixMarket";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

double parse_value(std::string_view token, std::size_t line_no) {
    double value = 0.0;
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError("line " + std::to_string(line_no) + ": bad numeric token '" +
                         std::string(token) + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError("line " + std::to_string(line_no) + ": non-finite entry '" +
                         std::string(token) + "'");
    }
    return value;
}

std::size_t parse_dimension(const std::string& token, std::size_t line_no) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad dimension '" + token + "'");
    }
    if (value == 0) {
        throw ParseError("line " + std::to_string(line_no) + ": dimensions must be positive");
    }
    return value;
}

} // namespace

Matrix read_matrix(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw ParseError("empty input");
    ++line_no;
    {
        std::istringstream header(line);
        std::string banner, object, format, field, symmetry;
        header >> banner >> object >> format >> field >> symmetry;
        if (banner != kBanner || lower(object) != "matrix" || lower(format) != "array" ||
            lower(field) != "real" || lower(symmetry) != "general") {
            throw ParseError("unsupported header '" + line +
                             "', expected '%%MatrixMarket matrix array real general'");
        }
    }

    // Skip comments and blank lines up to the size line.
    std::string_view size_line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '%') continue;
        size_line = t;
        break;
    }
    if (size_line.empty()) throw ParseError("missing size line");

    std::size_t rows = 0;
    std::size_t cols = 0;
    {
        std::istringstream sizes{std::string(size_line)};
        std::string r, c, extra;
        if (!(sizes >> r >> c) || (sizes >> extra)) {
            throw ParseError("line " + std::to_string(line_no) + ": expected '<rows> <cols>'");
        }
        rows = parse_dimension(r, line_no);
        cols = parse_dimension(c, line_no);
    }

    Matrix m(rows, cols);
    const std::size_t expected = rows * cols;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '%') continue;
        std::istringstream tokens{std::string(t)};
        std::string token;
        while (tokens >> token) {
            if (count == expected) {
                throw ParseError("line " + std::to_string(line_no) + ": more than " +
                                 std::to_string(expected) + " entries");
            }
            // Column-major in the file.
            const std::size_t j = count / rows;
            const std::size_t i = count % rows;
            m(i, j) = parse_value(token, line_no);
            ++count;
        }
    }
    if (count != expected) {
        throw ParseError("expected " + std::to_string(expected) + " entries, found " +
                         std::to_string(count));
    }
    return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "' for reading");
    try {
        return read_matrix(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_matrix(std::ostream& out, const Matrix& m) {
    out << kBanner << " matrix array real general\n";
    out << m.rows() << ' ' << m.cols() << '\n';
    char buf[64];
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const auto res = std::to_chars(buf, buf + sizeof buf, m(i, j),
                                           std::chars_format::general, 17);
            out.write(buf, res.ptr - buf);
            out.put('\n');
        }
    }
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_matrix(out, m);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

} // namespace panelfact
