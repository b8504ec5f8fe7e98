#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "kgen/cli.hpp"
#include "kgen/errors.hpp"

namespace kgen::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view token, std::size_t line_no) {
  token = trim(token);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw error("parse_error", "ensemble file line " + std::to_string(line_no) +
                                   ": not a number: '" + std::string(token) + "'");
  return value;
}

}  // namespace

EnsembleFile parse_ensemble_csv(const std::string& text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::size_t end = nl == std::string::npos ? text.size() : nl;
    lines.push_back(std::string_view(text).substr(start, end - start));
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw error("parse_error", "ensemble file is empty");

  const std::string_view header = trim(lines.front());
  bool with_probability = false;
  if (header == "energy") {
    with_probability = false;
  } else if (header == "energy,probability") {
    with_probability = true;
  } else {
    throw error("parse_error",
                "ensemble file header must be 'energy' or 'energy,probability', got '" +
                    std::string(header) + "'");
  }

  std::vector<double> energies, probabilities;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (with_probability) {
      if (comma == std::string_view::npos)
        throw error("parse_error", "ensemble file line " + std::to_string(i + 1) +
                                       ": expected two comma-separated columns");
      energies.push_back(parse_number(line.substr(0, comma), i + 1));
      probabilities.push_back(parse_number(line.substr(comma + 1), i + 1));
    } else {
      if (comma != std::string_view::npos)
        throw error("parse_error", "ensemble file line " + std::to_string(i + 1) +
                                       ": expected a single column");
      energies.push_back(parse_number(line, i + 1));
    }
  }
  if (energies.empty())
    throw error("parse_error", "ensemble file has a header but no data rows");

  EnsembleFile file;
  file.energies = Eigen::Map<const Eigen::ArrayXd>(energies.data(),
                                                   static_cast<Eigen::Index>(energies.size()));
  if (with_probability)
    file.probabilities = Eigen::Map<const Eigen::ArrayXd>(
        probabilities.data(), static_cast<Eigen::Index>(probabilities.size()));
  return file;
}

}  // namespace kgen::cli
