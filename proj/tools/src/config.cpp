#include "plalam_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "plalam/envs.hpp"

namespace plalam::cli {
namespace {

struct Value {
  enum Kind { str, num, boolean, array };
  Kind kind = num;
  std::string s;
  double d = 0.0;
  bool b = false;
  std::vector<Value> items;
  int line = 0;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Comments start at an unquoted '#'.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

Value parse_scalar(const std::string& text, int line) {
  Value v;
  v.line = line;
  if (text.empty()) fail(line, "empty value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') fail(line, "unterminated string");
    v.kind = Value::str;
    v.s = text.substr(1, text.size() - 2);
    if (v.s.find('"') != std::string::npos) fail(line, "embedded quote in string");
    return v;
  }
  if (text == "true" || text == "false") {
    v.kind = Value::boolean;
    v.b = (text == "true");
    return v;
  }
  char* end = nullptr;
  v.d = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v.d))
    fail(line, "cannot parse value '" + text + "'");
  v.kind = Value::num;
  return v;
}

// Splits "a, b, c" on unquoted commas.
std::vector<std::string> split_elems(const std::string& body, int line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : body) {
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) fail(line, "unterminated string");
  std::string last = trim(cur);
  if (!last.empty()) out.push_back(last);
  for (const std::string& e : out)
    if (e.empty()) fail(line, "empty array element");
  return out;
}

Value parse_value(const std::string& text, int line) {
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') fail(line, "unterminated array");
    Value v;
    v.kind = Value::array;
    v.line = line;
    for (const std::string& e : split_elems(text.substr(1, text.size() - 2), line))
      v.items.push_back(parse_scalar(e, line));
    return v;
  }
  return parse_scalar(text, line);
}

bool integral(double d) { return d == std::floor(d) && std::abs(d) <= 9e15; }

int as_int(const Value& v, const std::string& key) {
  if (v.kind != Value::num || !integral(v.d))
    fail(v.line, "'" + key + "' must be an integer");
  return static_cast<int>(v.d);
}

double as_double(const Value& v, const std::string& key) {
  if (v.kind != Value::num) fail(v.line, "'" + key + "' must be a number");
  return v.d;
}

bool as_bool(const Value& v, const std::string& key) {
  if (v.kind != Value::boolean) fail(v.line, "'" + key + "' must be true or false");
  return v.b;
}

std::string as_str(const Value& v, const std::string& key) {
  if (v.kind != Value::str) fail(v.line, "'" + key + "' must be a quoted string");
  return v.s;
}

std::vector<std::string> as_str_array(const Value& v, const std::string& key) {
  if (v.kind != Value::array) fail(v.line, "'" + key + "' must be an array");
  std::vector<std::string> out;
  for (const Value& e : v.items) out.push_back(as_str(e, key));
  return out;
}

std::vector<double> as_num_array(const Value& v, const std::string& key) {
  if (v.kind != Value::array) fail(v.line, "'" + key + "' must be an array");
  std::vector<double> out;
  for (const Value& e : v.items) out.push_back(as_double(e, key));
  return out;
}

std::vector<std::uint64_t> as_seed_array(const Value& v, const std::string& key) {
  if (v.kind != Value::array) fail(v.line, "'" + key + "' must be an array");
  std::vector<std::uint64_t> out;
  for (const Value& e : v.items) {
    if (e.kind != Value::num || !integral(e.d) || e.d < 0)
      fail(v.line, "'" + key + "' entries must be non-negative integers");
    out.push_back(static_cast<std::uint64_t>(e.d));
  }
  return out;
}

std::string fmt_double(double d) { return nlohmann::json(d).dump(); }

template <typename T>
void check_unique(const std::vector<T>& xs, const std::string& what) {
  std::set<T> seen(xs.begin(), xs.end());
  if (seen.size() != xs.size()) throw ConfigError("duplicate " + what);
}

void validate(const RunConfig& c) {
  std::vector<std::string> envs = envs::env_names();
  if (std::find(envs.begin(), envs.end(), c.env) == envs.end())
    throw ConfigError("unknown env '" + c.env + "'");
  if (c.methods.empty()) throw ConfigError("methods must be non-empty");
  for (const std::string& m : c.methods) parse_method(m);
  check_unique(c.methods, "method");
  if (c.seeds.empty()) throw ConfigError("seeds must be non-empty");
  check_unique(c.seeds, "seed");
  if (c.output_dir.empty()) throw ConfigError("output_dir must be non-empty");
  if (c.env_dim < 1) throw ConfigError("env_dim must be >= 1");
  if (c.total_queries < 1) throw ConfigError("total_queries must be >= 1");
  if (c.n_init < 1) throw ConfigError("n_init must be >= 1");
  if (c.n_par < 1) throw ConfigError("n_par must be >= 1");
  if (c.n_thres < 2) throw ConfigError("n_thres must be >= 2");
  if (c.cp < 0.0) throw ConfigError("cp must be >= 0");
  if (c.sigma_mult <= 0.0) throw ConfigError("sigma_mult must be > 0");
  if (c.sigma <= 0.0) throw ConfigError("sigma must be > 0");
  if (c.population < 2) throw ConfigError("population must be >= 2");
  if (c.elites < 1 || c.elites > c.population)
    throw ConfigError("elites must be in [1, population]");
  if (c.lambda < 0) throw ConfigError("lambda must be >= 0");
  if (c.codec != "identity" && c.codec != "pca" && c.codec != "random_projection")
    throw ConfigError("unknown codec '" + c.codec + "'");
  if (c.latent_dim < 0) throw ConfigError("latent_dim must be >= 0");
  if (c.encoder != "trajectory" && c.encoder != "identity")
    throw ConfigError("unknown encoder '" + c.encoder + "'");
  if (c.snapshot_stride < 0) throw ConfigError("snapshot_stride must be >= 0");
  if (c.zk_scales.empty()) throw ConfigError("zk_scales must be non-empty");
  for (double s : c.zk_scales)
    if (!(s > 0.0)) throw ConfigError("zk_scales entries must be > 0");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Value> kv;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(line_no, "missing key");
    for (char ch : key)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
        fail(line_no, "bad key '" + key + "'");
    Value v = parse_value(trim(line.substr(eq + 1)), line_no);
    if (!kv.emplace(key, v).second) fail(line_no, "duplicate key '" + key + "'");
  }

  RunConfig c;
  std::set<std::string> used;
  auto take = [&](const std::string& key) -> const Value* {
    auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };
  auto require = [&](const std::string& key) -> const Value& {
    const Value* v = take(key);
    if (!v) throw ConfigError("missing required key '" + key + "'");
    return *v;
  };

  c.env = as_str(require("env"), "env");
  c.methods = as_str_array(require("methods"), "methods");
  c.output_dir = as_str(require("output_dir"), "output_dir");

  const Value* seeds = take("seeds");
  const Value* seed_start = take("seed_start");
  const Value* seed_count = take("seed_count");
  if (seeds && (seed_start || seed_count))
    throw ConfigError("give either seeds or seed_start/seed_count, not both");
  if (seeds) {
    c.seeds = as_seed_array(*seeds, "seeds");
  } else if (seed_start && seed_count) {
    int start = as_int(*seed_start, "seed_start");
    int count = as_int(*seed_count, "seed_count");
    if (start < 0) throw ConfigError("seed_start must be >= 0");
    if (count < 1) throw ConfigError("seed_count must be >= 1");
    for (int i = 0; i < count; ++i)
      c.seeds.push_back(static_cast<std::uint64_t>(start) + i);
  } else {
    throw ConfigError("missing required key 'seeds' (or seed_start/seed_count)");
  }

  if (const Value* v = take("env_dim")) c.env_dim = as_int(*v, "env_dim");
  if (const Value* v = take("total_queries")) c.total_queries = as_int(*v, "total_queries");
  if (const Value* v = take("n_init")) c.n_init = as_int(*v, "n_init");
  if (const Value* v = take("n_par")) c.n_par = as_int(*v, "n_par");
  if (const Value* v = take("n_thres")) c.n_thres = as_int(*v, "n_thres");
  if (const Value* v = take("cp")) c.cp = as_double(*v, "cp");
  if (const Value* v = take("sigma_mult")) c.sigma_mult = as_double(*v, "sigma_mult");
  if (const Value* v = take("sigma")) c.sigma = as_double(*v, "sigma");
  if (const Value* v = take("population")) c.population = as_int(*v, "population");
  if (const Value* v = take("elites")) c.elites = as_int(*v, "elites");
  if (const Value* v = take("lambda")) c.lambda = as_int(*v, "lambda");
  if (const Value* v = take("codec")) c.codec = as_str(*v, "codec");
  if (const Value* v = take("latent_dim")) c.latent_dim = as_int(*v, "latent_dim");
  if (const Value* v = take("encoder")) c.encoder = as_str(*v, "encoder");
  if (const Value* v = take("snapshot_stride"))
    c.snapshot_stride = as_int(*v, "snapshot_stride");
  if (const Value* v = take("zk_scales")) c.zk_scales = as_num_array(*v, "zk_scales");
  if (const Value* v = take("save_artifacts"))
    c.save_artifacts = as_bool(*v, "save_artifacts");
  if (const Value* v = take("record_timing"))
    c.record_timing = as_bool(*v, "record_timing");

  for (const auto& [key, v] : kv)
    if (!used.count(key)) fail(v.line, "unknown key '" + key + "'");

  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  auto str_list = [](const std::vector<std::string>& xs) {
    std::string s = "[";
    for (size_t i = 0; i < xs.size(); ++i)
      s += (i ? ", \"" : "\"") + xs[i] + "\"";
    return s + "]";
  };
  out << "env = \"" << c.env << "\"\n";
  out << "env_dim = " << c.env_dim << "\n";
  out << "methods = " << str_list(c.methods) << "\n";
  out << "seeds = [";
  for (size_t i = 0; i < c.seeds.size(); ++i) out << (i ? ", " : "") << c.seeds[i];
  out << "]\n";
  out << "output_dir = \"" << c.output_dir << "\"\n";
  out << "total_queries = " << c.total_queries << "\n";
  out << "n_init = " << c.n_init << "\n";
  out << "n_par = " << c.n_par << "\n";
  out << "n_thres = " << c.n_thres << "\n";
  out << "cp = " << fmt_double(c.cp) << "\n";
  out << "sigma_mult = " << fmt_double(c.sigma_mult) << "\n";
  out << "sigma = " << fmt_double(c.sigma) << "\n";
  out << "population = " << c.population << "\n";
  out << "elites = " << c.elites << "\n";
  out << "lambda = " << c.lambda << "\n";
  out << "codec = \"" << c.codec << "\"\n";
  out << "latent_dim = " << c.latent_dim << "\n";
  out << "encoder = \"" << c.encoder << "\"\n";
  out << "snapshot_stride = " << c.snapshot_stride << "\n";
  out << "zk_scales = [";
  for (size_t i = 0; i < c.zk_scales.size(); ++i)
    out << (i ? ", " : "") << fmt_double(c.zk_scales[i]);
  out << "]\n";
  out << "save_artifacts = " << (c.save_artifacts ? "true" : "false") << "\n";
  out << "record_timing = " << (c.record_timing ? "true" : "false") << "\n";
  return out.str();
}

std::string config_hash(const RunConfig& cfg) {
  std::string text = serialize_config(cfg);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::uint64_t> parse_seed_spec(const std::string& spec) {
  if (spec.empty()) throw ConfigError("empty seed spec");
  std::vector<std::uint64_t> out;
  auto parse_u64 = [&](const std::string& tok) {
    char* end = nullptr;
    std::string t = trim(tok);
    if (t.empty()) throw ConfigError("empty seed in spec '" + spec + "'");
    if (t.find('-') != std::string::npos)
      throw ConfigError("seeds must be non-negative: '" + t + "'");
    unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size())
      throw ConfigError("bad seed '" + t + "' in spec '" + spec + "'");
    return static_cast<std::uint64_t>(v);
  };
  size_t colon = spec.find(':');
  if (colon != std::string::npos) {
    std::uint64_t start = parse_u64(spec.substr(0, colon));
    std::uint64_t count = parse_u64(spec.substr(colon + 1));
    if (count < 1) throw ConfigError("seed count must be >= 1");
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(start + i);
    return out;
  }
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(parse_u64(tok));
  if (out.empty()) throw ConfigError("empty seed spec");
  check_unique(out, "seed");
  return out;
}

std::string effective_output_dir(const RunConfig& cfg) {
  const char* env = std::getenv("PLALAM_OUTPUT_DIR");
  if (env && *env) return env;
  return cfg.output_dir;
}

}  // namespace plalam::cli
