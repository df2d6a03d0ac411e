#include "samossa/panel.hpp"

#include "samossa/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace samossa {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long> parse_index(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct Line {
  std::size_t number;
  std::vector<std::string_view> fields;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t start = 0;
  const std::string_view all(text);
  while (start <= all.size()) {
    auto end = all.find('\n', start);
    if (end == std::string_view::npos) end = all.size();
    ++number;
    auto raw = all.substr(start, end - start);
    if (!trim(raw).empty()) lines.push_back({number, split_fields(raw)});
    start = end + 1;
  }
  return lines;
}

[[noreturn]] void parse_fail(std::size_t line, std::size_t col, std::string_view cell) {
  std::ostringstream os;
  os << "non-numeric cell '" << cell << "' at row " << line << ", column " << col;
  throw ParseError(os.str());
}

TimePanel parse_wide(const std::vector<Line>& lines) {
  if (lines.empty()) throw IngestError("empty CSV input");
  const auto width = lines.front().fields.size();

  // The first row is a header iff none of its cells is numeric.
  const bool header = std::none_of(lines.front().fields.begin(), lines.front().fields.end(),
                                   [](auto f) { return parse_number(f).has_value(); });
  std::vector<std::string> names;
  if (header) {
    for (auto f : lines.front().fields) names.emplace_back(f);
  } else {
    for (std::size_t i = 0; i < width; ++i) names.push_back("s" + std::to_string(i + 1));
  }

  const std::size_t first = header ? 1 : 0;
  const auto rows = lines.size() - first;
  if (rows == 0) throw IngestError("CSV has a header but no data rows");

  Eigen::MatrixXd values(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(rows));
  for (std::size_t r = first; r < lines.size(); ++r) {
    const auto& line = lines[r];
    if (line.fields.size() != width) {
      std::ostringstream os;
      os << "ragged row " << line.number << ": expected " << width << " cells, found "
         << line.fields.size();
      throw IngestError(os.str());
    }
    for (std::size_t c = 0; c < width; ++c) {
      const auto v = parse_number(line.fields[c]);
      if (!v) parse_fail(line.number, c + 1, line.fields[c]);
      values(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r - first)) = *v;
    }
  }
  return TimePanel(std::move(names), std::move(values), 1);
}

TimePanel parse_long(const std::vector<Line>& lines) {
  if (lines.empty()) throw IngestError("empty CSV input");
  std::size_t first = 0;
  {
    const auto& f = lines.front().fields;
    if (f.size() == 3 && (!parse_index(f[1]) || !parse_number(f[2]))) first = 1;
  }

  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> index_of;
  std::vector<std::map<long, double>> cells;
  for (std::size_t r = first; r < lines.size(); ++r) {
    const auto& line = lines[r];
    if (line.fields.size() != 3) {
      std::ostringstream os;
      os << "ragged row " << line.number << ": long layout expects 3 cells (series,t,value)";
      throw IngestError(os.str());
    }
    const auto t = parse_index(line.fields[1]);
    if (!t) parse_fail(line.number, 2, line.fields[1]);
    const auto v = parse_number(line.fields[2]);
    if (!v) parse_fail(line.number, 3, line.fields[2]);

    std::string name(line.fields[0]);
    auto [it, inserted] = index_of.try_emplace(name, names.size());
    if (inserted) {
      names.push_back(name);
      cells.emplace_back();
    }
    if (!cells[it->second].emplace(*t, *v).second) {
      std::ostringstream os;
      os << "duplicate (series, t) pair (" << name << ", " << *t << ") at row " << line.number;
      throw IngestError(os.str());
    }
  }
  if (names.empty()) throw IngestError("CSV has a header but no data rows");

  long t_min = cells.front().begin()->first;
  long t_max = cells.front().rbegin()->first;
  for (const auto& c : cells) {
    t_min = std::min(t_min, c.begin()->first);
    t_max = std::max(t_max, c.rbegin()->first);
  }
  const auto length = static_cast<Eigen::Index>(t_max - t_min + 1);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(names.size()), length);
  for (std::size_t n = 0; n < names.size(); ++n) {
    for (long t = t_min; t <= t_max; ++t) {
      const auto it = cells[n].find(t);
      if (it == cells[n].end()) {
        std::ostringstream os;
        os << "missing observation for series '" << names[n] << "' at t=" << t;
        throw IngestError(os.str());
      }
      values(static_cast<Eigen::Index>(n), t - t_min) = it->second;
    }
  }
  return TimePanel(std::move(names), std::move(values), t_min);
}

}  // namespace

CsvLayout parse_layout(const std::string& name) {
  if (name == "wide") return CsvLayout::Wide;
  if (name == "long") return CsvLayout::Long;
  throw ParseError("unknown CSV layout '" + name + "' (expected wide|long)");
}

TimePanel::TimePanel(std::vector<std::string> names, Eigen::MatrixXd values, long t0)
    : names_(std::move(names)), values_(std::move(values)), t0_(t0) {
  validate();
}

TimePanel::TimePanel(Eigen::MatrixXd values, long t0) : values_(std::move(values)), t0_(t0) {
  for (Eigen::Index n = 0; n < values_.rows(); ++n) names_.push_back("s" + std::to_string(n + 1));
  validate();
}

void TimePanel::validate() const {
  if (values_.rows() < 1) throw ShapeError("a panel needs at least one series");
  if (values_.cols() < 1) throw ShapeError("a panel needs at least one time step");
  if (static_cast<Eigen::Index>(names_.size()) != values_.rows())
    throw ShapeError("series name count does not match the number of rows");
  if (!values_.allFinite()) throw IngestError("panel contains NaN or infinite values");
}

TimePanel TimePanel::slice(Eigen::Index begin, Eigen::Index end) const {
  if (begin < 0 || end > length() || begin >= end)
    throw IndexError("slice [" + std::to_string(begin) + ", " + std::to_string(end) +
                     ") is empty or outside the panel");
  return TimePanel(names_, values_.middleCols(begin, end - begin), t0_ + static_cast<long>(begin));
}

TimePanel TimePanel::append(const TimePanel& next) const {
  if (next.num_series() != num_series()) throw ShapeError("cannot append panels with different N");
  if (next.t0() != t_end() + 1) throw ShapeError("appended panel does not start after this one");
  Eigen::MatrixXd joined(num_series(), length() + next.length());
  joined << values_, next.values();
  return TimePanel(names_, std::move(joined), t0_);
}

std::tuple<TimePanel, TimePanel, TimePanel> split(const TimePanel& panel, const SplitSpec& spec) {
  const auto T = panel.length();
  if (!(1 <= spec.train_end && spec.train_end < spec.valid_end && spec.valid_end < spec.test_end &&
        spec.test_end <= T)) {
    std::ostringstream os;
    os << "invalid split (" << spec.train_end << ", " << spec.valid_end << ", " << spec.test_end
       << ") for T=" << T << "; need 1 <= train_end < valid_end < test_end <= T";
    throw SplitError(os.str());
  }
  return {panel.slice(0, spec.train_end), panel.slice(spec.train_end, spec.valid_end),
          panel.slice(spec.valid_end, spec.test_end)};
}

TimePanel parse_csv(const std::string& text, CsvLayout layout) {
  const auto lines = tokenize(text);
  return layout == CsvLayout::Wide ? parse_wide(lines) : parse_long(lines);
}

TimePanel load_csv(const std::filesystem::path& path, CsvLayout layout) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), layout);
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string to_csv(const TimePanel& panel, CsvLayout layout) {
  std::string out;
  const auto& names = panel.names();
  if (layout == CsvLayout::Wide) {
    for (std::size_t n = 0; n < names.size(); ++n) out += (n ? "," : "") + names[n];
    out += '\n';
    for (Eigen::Index t = 0; t < panel.length(); ++t) {
      for (Eigen::Index n = 0; n < panel.num_series(); ++n) {
        if (n) out += ',';
        out += format_double(panel(n, t));
      }
      out += '\n';
    }
  } else {
    out += "series,t,value\n";
    for (Eigen::Index n = 0; n < panel.num_series(); ++n)
      for (Eigen::Index t = 0; t < panel.length(); ++t)
        out += names[static_cast<std::size_t>(n)] + ',' + std::to_string(panel.t0() + t) + ',' +
               format_double(panel(n, t)) + '\n';
  }
  return out;
}

void save_csv(const TimePanel& panel, const std::filesystem::path& path, CsvLayout layout) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write '" + path.string() + "'");
  out << to_csv(panel, layout);
}

}  // namespace samossa
