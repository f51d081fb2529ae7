#include "singpencil/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "singpencil/errors.hpp"

namespace singpencil::mm {

namespace {

struct Token {
  std::string_view text;
  int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Next non-comment, non-blank line; false at end of input.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '%') continue;
      return true;
    }
    return false;
  }

  bool raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  [[noreturn]] void fail(int column, const std::string& msg) const {
    throw ParseError(source_, line_no_, column, msg);
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::string source_;
  int line_no_ = 0;
};

double parse_double(const LineReader& r, const Token& t) {
  double v = 0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) r.fail(t.column, "expected a number, got '" + std::string(t.text) + "'");
  return v;
}

long parse_index(const LineReader& r, const Token& t) {
  long v = 0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || v < 0) {
    r.fail(t.column, "expected a nonnegative integer, got '" + std::string(t.text) + "'");
  }
  return v;
}

}  // namespace

CMatrix read(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  std::string line;
  if (!r.raw(line)) r.fail(1, "empty file");
  const auto head = tokenize(line);
  if (head.size() < 5 || lower(head[0].text) != "%%matrixmarket") {
    r.fail(1, "missing '%%MatrixMarket matrix <format> <field> <symmetry>' header");
  }
  if (lower(head[1].text) != "matrix") r.fail(head[1].column, "only 'matrix' objects are supported");
  const std::string format = lower(head[2].text);
  const std::string field = lower(head[3].text);
  const std::string symmetry = lower(head[4].text);
  if (format != "array" && format != "coordinate") r.fail(head[2].column, "unknown format '" + format + "'");
  if (field != "real" && field != "complex" && field != "integer" && field != "double") {
    r.fail(head[3].column, "unsupported field '" + field + "'");
  }
  if (symmetry != "general") r.fail(head[4].column, "only 'general' symmetry is supported");
  const bool is_complex = field == "complex";
  const std::size_t per_value = is_complex ? 2 : 1;

  if (!r.next(line)) r.fail(1, "missing size line");
  const auto size = tokenize(line);
  const std::size_t want = format == "array" ? 2 : 3;
  if (size.size() != want) r.fail(1, "size line needs " + std::to_string(want) + " integers");
  const long rows = parse_index(r, size[0]);
  const long cols = parse_index(r, size[1]);
  CMatrix m = CMatrix::Zero(rows, cols);

  auto read_value = [&](const std::vector<Token>& toks, std::size_t at) {
    const double re = parse_double(r, toks[at]);
    const double im = is_complex ? parse_double(r, toks[at + 1]) : 0.0;
    return cplx{re, im};
  };

  if (format == "array") {
    // Column-major, one entry per line.
    for (long j = 0; j < cols; ++j) {
      for (long i = 0; i < rows; ++i) {
        if (!r.next(line)) r.fail(1, "unexpected end of file: expected " + std::to_string(rows * cols) + " entries");
        const auto toks = tokenize(line);
        if (toks.size() != per_value) {
          r.fail(toks.empty() ? 1 : toks.back().column,
                 "expected " + std::to_string(per_value) + " value(s) per entry");
        }
        m(i, j) = read_value(toks, 0);
      }
    }
  } else {
    const long nnz = parse_index(r, size[2]);
    for (long e = 0; e < nnz; ++e) {
      if (!r.next(line)) r.fail(1, "unexpected end of file: expected " + std::to_string(nnz) + " entries");
      const auto toks = tokenize(line);
      if (toks.size() != 2 + per_value) {
        r.fail(toks.empty() ? 1 : toks.back().column,
               "expected 'row col value" + std::string(is_complex ? " value'" : "'"));
      }
      const long i = parse_index(r, toks[0]);
      const long j = parse_index(r, toks[1]);
      if (i < 1 || i > rows) r.fail(toks[0].column, "row index out of range");
      if (j < 1 || j > cols) r.fail(toks[1].column, "column index out of range");
      m(i - 1, j - 1) += read_value(toks, 2);
    }
  }
  if (r.next(line)) r.fail(1, "trailing data after the last entry");
  if (!m.allFinite()) r.fail(1, "non-finite entry");
  return m;
}

CMatrix read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  return read(in, path);
}

void write(std::ostream& out, const CMatrix& m) {
  out << "%%MatrixMarket matrix array complex general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const int len = std::snprintf(buf, sizeof buf, "%.17g %.17g\n", m(i, j).real(), m(i, j).imag());
      out.write(buf, len);
    }
  }
}

void write_file(const std::string& path, const CMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  write(out, m);
}

}  // namespace singpencil::mm
