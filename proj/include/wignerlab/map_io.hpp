#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wignerlab/errors.hpp"
#include "wignerlab/superop.hpp"

namespace wignerlab {

// Map file (JSON):
//
//   {
//     "format_version": 1,
//     "n": <dimension>,
//     "representation": "hermitian-basis" | "choi",
//     "matrix": [[...], ...]      n^2 rows of n^2 entries, row-major
//   }
//
// hermitian-basis entries are real numbers; choi entries are [re, im] pairs.
// Numbers are written with 17 significant digits, which round-trips every
// double exactly.

inline constexpr int kMapFormatVersion = 1;
inline constexpr double kChoiFileTolerance = 1e-9;

enum class Representation { HermitianBasis, Choi };

inline const char* to_string(Representation r) {
  return r == Representation::HermitianBasis ? "hermitian-basis" : "choi";
}

inline Representation parse_representation(const std::string& s) {
  if (s == "hermitian-basis") return Representation::HermitianBasis;
  if (s == "choi") return Representation::Choi;
  throw ParseError("representation", "unknown representation '" + s + "'");
}

/// 17 significant digits, enough to parse back to exactly `x`. Negative zero is spelled "-0.0" so JSON readers keep the sign.
inline std::string format_double(double x) {
  if (!std::isfinite(x)) throw PreconditionError("cannot serialize non-finite value");
  if (x == 0.0) return std::signbit(x) ? "-0.0" : "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_map(std::ostream& os, const Superoperator& t,
                      Representation rep = Representation::HermitianBasis) {
  const Index n = t.dim();
  const Index d = n * n;
  os << "{\n  \"format_version\": " << kMapFormatVersion << ",\n  \"n\": " << n
     << ",\n  \"representation\": \"" << to_string(rep) << "\",\n  \"matrix\": [\n";
  if (rep == Representation::HermitianBasis) {
    const auto& m = t.matrix();
    for (Index i = 0; i < d; ++i) {
      os << "    [";
      for (Index j = 0; j < d; ++j) os << (j ? ", " : "") << format_double(m(i, j));
      os << "]" << (i + 1 < d ? "," : "") << "\n";
    }
  } else {
    const ChoiMatrix c = choi_of(t);
    const auto& m = c.matrix();
    for (Index i = 0; i < d; ++i) {
      os << "    [";
      for (Index j = 0; j < d; ++j)
        os << (j ? ", " : "") << "[" << format_double(m(i, j).real()) << ", "
           << format_double(m(i, j).imag()) << "]";
      os << "]" << (i + 1 < d ? "," : "") << "\n";
    }
  }
  os << "  ]\n}\n";
}

inline std::string map_to_string(const Superoperator& t,
                                 Representation rep = Representation::HermitianBasis) {
  std::ostringstream os;
  write_map(os, t, rep);
  return os.str();
}

namespace detail {

inline double parse_number(const nlohmann::json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError(field, "expected a number");
  return v.get<double>();
}

}  // namespace detail

inline Superoperator parse_map(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("<document>", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("<document>", "expected a JSON object");

  if (!j.contains("format_version")) throw ParseError("format_version", "missing");
  if (!j["format_version"].is_number_integer() ||
      j["format_version"].get<long long>() != kMapFormatVersion)
    throw ParseError("format_version",
                     "unsupported version (expected " + std::to_string(kMapFormatVersion) + ")");

  if (!j.contains("n")) throw ParseError("n", "missing");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1)
    throw ParseError("n", "expected a positive integer");
  const Index n = static_cast<Index>(j["n"].get<long long>());
  const Index d = n * n;

  if (!j.contains("representation") || !j["representation"].is_string())
    throw ParseError("representation", "missing or not a string");
  const Representation rep = parse_representation(j["representation"].get<std::string>());

  if (!j.contains("matrix") || !j["matrix"].is_array())
    throw ParseError("matrix", "missing or not an array");
  const auto& rows = j["matrix"];
  if (static_cast<Index>(rows.size()) != d)
    throw ParseError("matrix", "dimension mismatch: " + std::to_string(rows.size()) +
                                   " rows, expected n^2 = " + std::to_string(d));

  if (rep == Representation::HermitianBasis) {
    Eigen::MatrixXd m(d, d);
    for (Index i = 0; i < d; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      const std::string rf = "matrix[" + std::to_string(i) + "]";
      if (!row.is_array() || static_cast<Index>(row.size()) != d)
        throw ParseError(rf, "dimension mismatch: expected " + std::to_string(d) + " entries");
      for (Index c = 0; c < d; ++c)
        m(i, c) = detail::parse_number(row[static_cast<std::size_t>(c)],
                                       rf + "[" + std::to_string(c) + "]");
    }
    return Superoperator(n, std::move(m));
  }

  Eigen::MatrixXcd m(d, d);
  for (Index i = 0; i < d; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    const std::string rf = "matrix[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != d)
      throw ParseError(rf, "dimension mismatch: expected " + std::to_string(d) + " entries");
    for (Index c = 0; c < d; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      const std::string ef = rf + "[" + std::to_string(c) + "]";
      if (!e.is_array() || e.size() != 2) throw ParseError(ef, "expected [re, im]");
      m(i, c) = Complex(detail::parse_number(e[0], ef), detail::parse_number(e[1], ef));
    }
  }
  try {
    return superop_of_choi(ChoiMatrix(n, std::move(m), kChoiFileTolerance));
  } catch (const NotHermitian& e) {
    throw ParseError("matrix", std::string("choi matrix is not Hermitian: ") + e.what());
  }
}

inline void save_map(const Superoperator& t, const std::string& path,
                     Representation rep = Representation::HermitianBasis) {
  std::ofstream os(path);
  if (!os) throw PreconditionError("cannot open '" + path + "' for writing");
  write_map(os, t, rep);
  if (!os) throw PreconditionError("failed writing '" + path + "'");
}

inline Superoperator load_map(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw PreconditionError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_map(ss.str());
}

}  // namespace wignerlab
