#include "addm/ifs_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "addm/errors.hpp"

namespace addm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

State parse_state(const std::string& tok, std::size_t line) {
  if (!all_digits(tok) || tok.size() > 9)
    throw ParseError("expected a state index, got '" + tok + "'", line, 0);
  return static_cast<State>(std::stoul(tok));
}

bool valid_label(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
  return true;
}

}  // namespace

mpq_class parse_rational(std::string_view text) {
  text = trim(text);
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? "1" : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw InputError("malformed rational '" + std::string(text) + "'");
  mpz_class d(std::string(den), 10);
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  mpq_class q{mpz_class(std::string(num), 10), d};
  q.canonicalize();
  if (text.front() == '-') q = -q;
  return q;
}

FiniteIFS parse_ifs(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }

  std::optional<std::size_t> num_states;
  std::vector<std::string> labels;
  std::vector<Transformation> maps;
  std::optional<Metric> metric;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.starts_with("states:")) {
      if (num_states) throw ParseError("duplicate 'states:' line", lineno, 0);
      const auto toks = split_ws(line.substr(7));
      if (toks.empty()) throw ParseError("'states:' lists no states", lineno, 0);
      for (std::size_t k = 0; k < toks.size(); ++k)
        if (parse_state(toks[k], lineno) != k)
          throw ParseError("states must be listed as 0 1 ... n-1 in order", lineno, 0);
      num_states = toks.size();
    } else if (line.starts_with("label ")) {
      if (!num_states) throw ParseError("'label' before 'states:'", lineno, 0);
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) throw ParseError("label line needs ':'", lineno, 0);
      const std::string name{trim(line.substr(6, colon - 6))};
      if (!valid_label(name)) throw ParseError("invalid label name '" + name + "'", lineno, 0);
      for (const auto& existing : labels)
        if (existing == name) throw ParseError("duplicate label '" + name + "'", lineno, 0);
      const auto toks = split_ws(line.substr(colon + 1));
      if (toks.size() != *num_states)
        throw ParseError("map '" + name + "' has " + std::to_string(toks.size()) +
                             " entries, expected " + std::to_string(*num_states),
                         lineno, 0);
      std::vector<State> image;
      for (const auto& tok : toks) {
        const State y = parse_state(tok, lineno);
        if (y >= *num_states)
          throw ParseError("map '" + name + "' sends a state to " + tok + ", outside 0.." +
                               std::to_string(*num_states - 1),
                           lineno, 0);
        image.push_back(y);
      }
      labels.push_back(name);
      maps.emplace_back(std::move(image));
    } else if (line == "metric:") {
      if (!num_states) throw ParseError("'metric:' before 'states:'", lineno, 0);
      if (metric) throw ParseError("duplicate 'metric:' block", lineno, 0);
      Metric rows;
      while (rows.size() < *num_states) {
        ++i;
        if (i >= lines.size())
          throw ParseError("metric block ends early: expected " + std::to_string(*num_states) +
                               " rows",
                           lines.size(), 0);
        std::string_view row_text = lines[i];
        if (const auto hash = row_text.find('#'); hash != std::string_view::npos)
          row_text = row_text.substr(0, hash);
        const auto toks = split_ws(row_text);
        if (toks.empty()) continue;
        if (toks.size() != *num_states)
          throw ParseError("metric row has " + std::to_string(toks.size()) + " entries, expected " +
                               std::to_string(*num_states),
                           i + 1, 0);
        std::vector<mpq_class> row;
        for (const auto& tok : toks) {
          try {
            row.push_back(parse_rational(tok));
          } catch (const InputError& e) {
            throw ParseError(e.what(), i + 1, 0);
          }
        }
        rows.push_back(std::move(row));
      }
      metric = std::move(rows);
    } else {
      throw ParseError("unrecognized line '" + std::string(line) + "'", lineno, 0);
    }
  }

  if (!num_states) throw ParseError("missing 'states:' line", 0, 0);
  if (maps.empty()) throw ParseError("no 'label' lines", 0, 0);
  try {
    return FiniteIFS(*num_states, std::move(labels), std::move(maps), std::move(metric));
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ParseError(e.what(), 0, 0);
  }
}

FiniteIFS load_ifs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ifs(buf.str());
}

std::string format_ifs(const FiniteIFS& ifs) {
  std::ostringstream os;
  os << "states:";
  for (std::size_t x = 0; x < ifs.num_states(); ++x) os << ' ' << x;
  os << '\n';
  for (std::size_t l = 0; l < ifs.num_labels(); ++l) {
    os << "label " << ifs.labels()[l] << ':';
    for (State y : ifs.map(l).image()) os << ' ' << y;
    os << '\n';
  }
  if (ifs.metric()) {
    os << "metric:\n";
    for (const auto& row : *ifs.metric()) {
      for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << row[k].get_str();
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace addm
