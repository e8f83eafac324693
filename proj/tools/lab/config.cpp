#include "lab/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "blowup/error.hpp"

namespace lab {

namespace {

// A value problem at `offset` characters into the value text.
struct ValueError {
  std::string message;
  std::size_t offset = 0;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::islower(static_cast<unsigned char>(s[0])) || s[0] == '_' ||
                     std::isupper(static_cast<unsigned char>(s[0]))))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

double parse_real(std::string_view s, std::size_t offset = 0) {
  const auto t = trim(s);
  const std::size_t lead = t.empty() ? 0 : static_cast<std::size_t>(t.data() - s.data());
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(x))
    throw ValueError{"expected a finite number", offset + lead};
  return x;
}

long parse_integer(std::string_view s) {
  const auto t = trim(s);
  long x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) throw ValueError{"expected an integer", 0};
  return x;
}

using Check = std::function<const char*(double)>;  // nullptr when fine

const char* positive(double x) { return x > 0.0 ? nullptr : "must be positive"; }
const char* unit_open(double x) { return x > 0.0 && x < 1.0 ? nullptr : "must lie in (0, 1)"; }
const char* any(double) { return nullptr; }

struct Field {
  const char* section;
  const char* key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::optional<std::string>(const ExperimentConfig&)> get;
};

Field real(const char* sec, const char* key, double ExperimentConfig::*m, Check check = positive) {
  return {sec, key,
          [m, check](ExperimentConfig& c, std::string_view v) {
            const double x = parse_real(v);
            if (const char* why = check(x)) throw ValueError{why, 0};
            c.*m = x;
          },
          [m](const ExperimentConfig& c) { return std::optional{format_number(c.*m)}; }};
}

Field optional_real(const char* sec, const char* key, std::optional<double> ExperimentConfig::*m) {
  return {sec, key,
          [m](ExperimentConfig& c, std::string_view v) {
            const double x = parse_real(v);
            if (!(x > 0.0)) throw ValueError{"must be positive", 0};
            c.*m = x;
          },
          [m](const ExperimentConfig& c) {
            return (c.*m) ? std::optional{format_number(*(c.*m))} : std::nullopt;
          }};
}

Field integer(const char* sec, const char* key, int ExperimentConfig::*m, long lo, long hi) {
  return {sec, key,
          [m, lo, hi](ExperimentConfig& c, std::string_view v) {
            const long x = parse_integer(v);
            if (x < lo || x > hi)
              throw ValueError{"must be between " + std::to_string(lo) + " and " + std::to_string(hi), 0};
            c.*m = static_cast<int>(x);
          },
          [m](const ExperimentConfig& c) { return std::optional{std::to_string(c.*m)}; }};
}

Field choice(const char* sec, const char* key, std::string ExperimentConfig::*m, std::set<std::string> allowed) {
  return {sec, key,
          [m, allowed](ExperimentConfig& c, std::string_view v) {
            const std::string s(trim(v));
            if (!allowed.empty() && !allowed.contains(s)) {
              std::string list;
              for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
              throw ValueError{"expected one of: " + list, 0};
            }
            c.*m = s;
          },
          [m](const ExperimentConfig& c) { return std::optional{c.*m}; }};
}

Field boolean(const char* sec, const char* key, bool ExperimentConfig::*m) {
  return {sec, key,
          [m](ExperimentConfig& c, std::string_view v) {
            const auto s = trim(v);
            if (s == "true")
              c.*m = true;
            else if (s == "false")
              c.*m = false;
            else
              throw ValueError{"expected true or false", 0};
          },
          [m](const ExperimentConfig& c) { return std::optional<std::string>{c.*m ? "true" : "false"}; }};
}

Field list(const char* sec, const char* key, std::vector<double> ExperimentConfig::*m, Check check) {
  return {sec, key,
          [m, check](ExperimentConfig& c, std::string_view v) {
            std::vector<double> out;
            std::size_t start = 0;
            while (true) {
              const auto comma = v.find(',', start);
              const auto item = v.substr(start, comma == std::string_view::npos ? v.npos : comma - start);
              const double x = parse_real(item, start);
              const auto lead = item.find_first_not_of(" \t");
              if (const char* why = check(x)) throw ValueError{why, start + lead};
              out.push_back(x);
              if (comma == std::string_view::npos) break;
              start = comma + 1;
            }
            c.*m = std::move(out);
          },
          [m](const ExperimentConfig& c) {
            std::string s;
            for (double x : c.*m) s += (s.empty() ? "" : ", ") + format_number(x);
            return std::optional{s};
          }};
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> table{
      choice("nonlinearity", "family", &C::family,
             {"power", "oscillatory_power", "exponential", "oscillatory_exponential", "tabulated"}),
      real("nonlinearity", "q", &C::q),
      real("nonlinearity", "alpha", &C::alpha),
      choice("nonlinearity", "table_path", &C::table_path, {}),
      choice("nonlinearity", "derivative", &C::derivative, {"closed_form", "finite_difference"}),

      optional_real("asymptotics", "t0", &C::t0),
      real("asymptotics", "quad_rel_tol", &C::quad_rel_tol),
      real("asymptotics", "tail_cap", &C::tail_cap),
      real("asymptotics", "check_cap", &C::check_cap),
      real("asymptotics", "window_lo", &C::window_lo),
      real("asymptotics", "window_hi", &C::window_hi),
      real("asymptotics", "shift_K", &C::shift_K, any),
      real("asymptotics", "shift_p", &C::shift_p),
      real("asymptotics", "h2_p", &C::h2_p),
      optional_real("asymptotics", "exp_alpha", &C::exp_alpha),
      optional_real("asymptotics", "gamma", &C::gamma),
      integer("asymptotics", "samples_per_decade", &C::samples_per_decade, 1, 1000),

      integer("radial", "dimension", &C::dimension, 1, 10),
      real("radial", "eps_R", &C::eps_R),
      real("radial", "switch_d", &C::switch_d),
      real("radial", "rel_tol", &C::rel_tol),
      real("radial", "abs_tol", &C::abs_tol),

      integer("pde", "n_r", &C::n_r, 4, 4096),
      integer("pde", "n_theta", &C::n_theta, 4, 4096),
      real("pde", "radius", &C::radius, [](double x) { return x > 0.0 && x <= 1.0 ? nullptr : "must lie in (0, 1]"; }),
      list("pde", "truncation", &C::truncation, positive),
      real("pde", "eps_b", &C::eps_b, [](double x) { return std::abs(x) < 1.0 ? nullptr : "must satisfy |eps_b| < 1"; }),
      integer("pde", "mode", &C::mode, 0, 1024),
      real("pde", "newton_rel_tol", &C::newton_rel_tol),

      list("symmetry", "lambdas", &C::lambdas, unit_open),

      real("maxprinciple", "p", &C::p, [](double x) { return x > 1.0 ? nullptr : "must exceed 1"; }),
      real("maxprinciple", "C0", &C::C0),
      real("maxprinciple", "lambda", &C::lambda, unit_open),
      real("maxprinciple", "C_H", &C::C_H),
      integer("maxprinciple", "lens_samples", &C::lens_samples, 2, 4096),
      boolean("maxprinciple", "refine", &C::refine),
      choice("maxprinciple", "exponent", &C::exponent, {"full", "half"}),
      real("maxprinciple", "euler_C0", &C::euler_C0),
      real("maxprinciple", "euler_a", &C::euler_a, unit_open),
      real("maxprinciple", "euler_b", &C::euler_b, [](double x) { return x > 0.0 && x <= 1.0 ? nullptr : "must lie in (0, 1]"; }),

      choice("output", "dir", &C::dir, {}),
  };
  return table;
}

const Field* find_field(std::string_view section, std::string_view key) {
  for (const auto& f : fields())
    if (section == f.section && key == f.key) return &f;
  return nullptr;
}

bool known_section(std::string_view section) {
  for (const auto& f : fields())
    if (section == f.section) return true;
  return false;
}

int column_of(std::string_view line, std::string_view part) {
  return static_cast<int>(part.data() - line.data()) + 1;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    const auto body = trim(line);
    if (body.empty() || body[0] == '#' || body[0] == ';') continue;
    if (body[0] == '[') {
      if (body.back() != ']')
        throw blowup::ConfigError("unterminated section header", line_no, column_of(line, body) + static_cast<int>(body.size()));
      const auto name = trim(body.substr(1, body.size() - 2));
      if (!known_section(name))
        throw blowup::ConfigError("unknown section '" + std::string(name) + "'", line_no,
                                  column_of(line, name.empty() ? body : name));
      section = name;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw blowup::ConfigError("expected 'key = value'", line_no, column_of(line, body) + static_cast<int>(body.size()));
    const auto key = trim(body.substr(0, eq));
    if (!is_identifier(key)) throw blowup::ConfigError("invalid key", line_no, column_of(line, body));
    if (section.empty()) throw blowup::ConfigError("key outside of any section", line_no, column_of(line, key));
    const Field* field = find_field(section, key);
    if (!field)
      throw blowup::ConfigError("unknown key '" + std::string(key) + "' in section [" + section + "]", line_no,
                                column_of(line, key));
    if (!seen.insert(section + "." + std::string(key)).second)
      throw blowup::ConfigError("duplicate key '" + std::string(key) + "'", line_no, column_of(line, key));

    const auto raw = body.substr(eq + 1);
    const auto value = trim(raw);
    try {
      field->set(cfg, value);
    } catch (const ValueError& e) {
      const int col = value.empty() ? column_of(line, raw) : column_of(line, value);
      throw blowup::ConfigError(std::string(key) + ": " + e.message, line_no, col + static_cast<int>(e.offset));
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw blowup::ConfigError("cannot open config file '" + path + "'", 0, 0);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (section != f.section) {
      if (!section.empty()) out += '\n';
      section = f.section;
      out += "[" + section + "]\n";
    }
    if (const auto v = f.get(cfg)) out += std::string(f.key) + " = " + *v + "\n";
  }
  return out;
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto dot = assignment.find('.');
  const auto eq = assignment.find('=');
  if (dot == std::string_view::npos || eq == std::string_view::npos || dot > eq)
    throw blowup::ConfigError("override must read section.key=value", 1, 1);
  const auto section = trim(assignment.substr(0, dot));
  const auto key = trim(assignment.substr(dot + 1, eq - dot - 1));
  const Field* field = find_field(section, key);
  if (!field)
    throw blowup::ConfigError("unknown override key '" + std::string(section) + "." + std::string(key) + "'", 1,
                              column_of(assignment, section));
  const auto value = trim(assignment.substr(eq + 1));
  try {
    field->set(cfg, value);
  } catch (const ValueError& e) {
    throw blowup::ConfigError(std::string(key) + ": " + e.message, 1,
                              static_cast<int>(eq) + 2 + static_cast<int>(e.offset));
  }
}

blowup::Nonlinearity make_nonlinearity(const ExperimentConfig& cfg) {
  using blowup::Nonlinearity;
  Nonlinearity f = [&] {
    if (cfg.family == "power") return Nonlinearity::power(cfg.q);
    if (cfg.family == "oscillatory_power") return Nonlinearity::oscillatory_power(cfg.q);
    if (cfg.family == "exponential") return Nonlinearity::exponential(cfg.alpha);
    if (cfg.family == "oscillatory_exponential") return Nonlinearity::oscillatory_exponential(cfg.alpha);
    if (cfg.table_path.empty()) throw blowup::ConfigError("tabulated family needs table_path", 0, 0);
    return Nonlinearity::load_table(cfg.table_path);
  }();
  if (cfg.derivative == "finite_difference") f = f.with_derivative_mode(blowup::DerivativeMode::finite_difference);
  return f;
}

}  // namespace lab
