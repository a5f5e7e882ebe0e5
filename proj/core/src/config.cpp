#include "fsco/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fsco/errors.hpp"
#include "fsco/serialize.hpp"

namespace fsco {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ArgumentError("empty entry in width list '" + s + "'");
    const long long v = parse_int(item);
    if (v <= 0) throw ArgumentError("layer widths must be positive, got '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw ArgumentError("empty width list");
  return out;
}

std::string size_list_str(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ArgumentError("expected true/false, got '" + s + "'");
}

std::uint64_t parse_u64(const std::string& s) {
  if (s.empty()) throw ArgumentError("empty integer value");
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) {
    throw ArgumentError("unparsable integer value '" + s + "'");
  }
  return v;
}

using Setter = std::function<void(FscoConfig&, const std::string&)>;

const std::map<std::string, Setter>& key_setters() {
  static const std::map<std::string, Setter> setters = {
      {"preset", [](FscoConfig& c, const std::string& v) { c.preset = v; }},
      {"dataset", [](FscoConfig& c, const std::string& v) { c.dataset = v; }},
      {"eta_g", [](FscoConfig& c, const std::string& v) { c.eta_g = parse_double(v); }},
      {"eta_d_base",
       [](FscoConfig& c, const std::string& v) { c.eta_d_base = parse_double(v); }},
      {"u_floor",
       [](FscoConfig& c, const std::string& v) { c.u_floor = parse_double(v); }},
      {"batch",
       [](FscoConfig& c, const std::string& v) { c.batch = static_cast<std::size_t>(parse_int(v)); }},
      {"noise_dim",
       [](FscoConfig& c, const std::string& v) { c.noise_dim = static_cast<std::size_t>(parse_int(v)); }},
      {"g_hidden",
       [](FscoConfig& c, const std::string& v) { c.g_hidden = parse_size_list(v); }},
      {"d_hidden",
       [](FscoConfig& c, const std::string& v) { c.d_hidden = parse_size_list(v); }},
      {"d_loss_halved",
       [](FscoConfig& c, const std::string& v) { c.d_loss_halved = parse_bool(v); }},
      {"g_loss_form",
       [](FscoConfig& c, const std::string& v) {
         if (v == "non_saturating") c.g_loss_form = GLossForm::kNonSaturating;
         else if (v == "minmax") c.g_loss_form = GLossForm::kMinMax;
         else throw ArgumentError("g_loss_form must be non_saturating or minmax");
       }},
      {"total_cycles",
       [](FscoConfig& c, const std::string& v) { c.total_cycles = parse_int(v); }},
      {"ema_window",
       [](FscoConfig& c, const std::string& v) { c.ema_window = static_cast<std::size_t>(parse_int(v)); }},
      {"gamma", [](FscoConfig& c, const std::string& v) { c.gamma = parse_double(v); }},
      {"tau", [](FscoConfig& c, const std::string& v) { c.tau = parse_double(v); }},
      {"actor_lr",
       [](FscoConfig& c, const std::string& v) { c.actor_lr = parse_double(v); }},
      {"critic_lr",
       [](FscoConfig& c, const std::string& v) { c.critic_lr = parse_double(v); }},
      {"noise",
       [](FscoConfig& c, const std::string& v) { c.noise_sigma = parse_double(v); }},
      {"buffer",
       [](FscoConfig& c, const std::string& v) { c.buffer_capacity = static_cast<std::size_t>(parse_int(v)); }},
      {"ddpg_batch",
       [](FscoConfig& c, const std::string& v) { c.ddpg_batch = static_cast<std::size_t>(parse_int(v)); }},
      {"actor_hidden",
       [](FscoConfig& c, const std::string& v) { c.actor_hidden = parse_size_list(v); }},
      {"critic_hidden",
       [](FscoConfig& c, const std::string& v) { c.critic_hidden = parse_size_list(v); }},
      {"mnist_images",
       [](FscoConfig& c, const std::string& v) { c.mnist_images = v; }},
      {"mnist_labels",
       [](FscoConfig& c, const std::string& v) { c.mnist_labels = v; }},
      {"mixture_modes",
       [](FscoConfig& c, const std::string& v) { c.mixture_modes = static_cast<std::size_t>(parse_int(v)); }},
      {"mixture_radius",
       [](FscoConfig& c, const std::string& v) { c.mixture_radius = parse_double(v); }},
      {"mixture_sigma",
       [](FscoConfig& c, const std::string& v) { c.mixture_sigma = parse_double(v); }},
      {"seed", [](FscoConfig& c, const std::string& v) { c.seed = parse_u64(v); }},
      {"sample_every",
       [](FscoConfig& c, const std::string& v) { c.sample_every = parse_int(v); }},
      {"sample_count",
       [](FscoConfig& c, const std::string& v) { c.sample_count = static_cast<std::size_t>(parse_int(v)); }},
  };
  return setters;
}

}  // namespace

FscoConfig preset_config(const std::string& name) {
  FscoConfig cfg;
  cfg.preset = name;
  if (name == "mnist28") {
    cfg.dataset = "mnist";
    cfg.eta_g = 0.0002;
    cfg.eta_d_base = 0.002;
    cfg.u_floor = 0.001;
    cfg.batch = 128;
    cfg.noise_dim = 100;
    cfg.g_hidden = {256};
    cfg.d_hidden = {256};
    cfg.total_cycles = 23450;  // 50 epochs of ceil(60000/128) batches
    cfg.gamma = 0.99;
    cfg.tau = 0.005;
    cfg.actor_lr = 0.0001;
    cfg.critic_lr = 0.0001;
    cfg.noise_sigma = 0.1;
    cfg.buffer_capacity = 10000;
    cfg.ddpg_batch = 64;
    cfg.sample_count = 16;
  } else if (name == "synthetic") {
    cfg.dataset = "synthetic";
    cfg.eta_g = 0.0002;
    cfg.eta_d_base = 0.005;
    cfg.u_floor = 0.001;
    cfg.batch = 64;
    cfg.noise_dim = 2;
    cfg.g_hidden = {64, 64};
    cfg.d_hidden = {64, 64};
    cfg.total_cycles = 5000;
    cfg.gamma = 0.99;
    cfg.tau = 0.005;
    cfg.actor_lr = 0.0001;
    cfg.critic_lr = 0.0001;
    cfg.noise_sigma = 0.1;
    cfg.buffer_capacity = 10000;
    cfg.ddpg_batch = 64;
    cfg.mixture_modes = 8;
    cfg.mixture_radius = 2.0;
    cfg.mixture_sigma = 0.02;
    cfg.sample_count = 2000;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected mnist28 or synthetic)");
  }
  return cfg;
}

FscoConfig parse_config_text(const std::string& text, const std::string& source) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    }
    if (!key_setters().count(key)) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    }
    if (entries.count(key)) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" +
                        key + "' (first on line " + std::to_string(entries[key].line) +
                        ")");
    }
    entries[key] = Entry{value, line_no};
  }

  const auto preset_it = entries.find("preset");
  if (preset_it == entries.end()) {
    throw ConfigError(source + ": preset required (preset = mnist28 | synthetic)");
  }

  FscoConfig cfg;
  try {
    cfg = preset_config(preset_it->second.value);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ":" + std::to_string(preset_it->second.line) + ": " +
                      e.what());
  }

  for (const auto& [key, entry] : entries) {
    if (key == "preset") continue;
    try {
      key_setters().at(key)(cfg, entry.value);
    } catch (const Error& e) {
      throw ConfigError(source + ":" + std::to_string(entry.line) + ": key '" + key +
                        "': " + e.what());
    }
  }

  try {
    validate_config(cfg);
  } catch (const Error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

FscoConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

void validate_config(const FscoConfig& cfg) {
  if (cfg.dataset != "mnist" && cfg.dataset != "synthetic") {
    throw ConfigError("dataset must be mnist or synthetic, got '" + cfg.dataset + "'");
  }
  if (!(cfg.eta_g > 0.0)) throw ConfigError("eta_g must be positive");
  if (!(cfg.eta_d_base > 0.0)) throw ConfigError("eta_d_base must be positive");
  if (!(cfg.u_floor > 0.0 && cfg.u_floor < 1.0)) {
    throw ConfigError("u_floor = " + format_double(cfg.u_floor) +
                      " out of range: the action floor must lie in (0,1)");
  }
  if (!(cfg.tau >= 0.0 && cfg.tau <= 1.0)) {
    throw ConfigError("tau = " + format_double(cfg.tau) +
                      " out of range: the soft-update mixing factor must lie in [0,1]");
  }
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0)) {
    throw ConfigError("gamma = " + format_double(cfg.gamma) +
                      " out of range: the discount factor must lie in [0,1)");
  }
  if (!(cfg.actor_lr > 0.0)) throw ConfigError("actor_lr must be positive");
  if (!(cfg.critic_lr > 0.0)) throw ConfigError("critic_lr must be positive");
  if (cfg.noise_sigma < 0.0) throw ConfigError("noise must be non-negative");
  if (cfg.batch == 0) throw ConfigError("batch must be positive");
  if (cfg.noise_dim == 0) throw ConfigError("noise_dim must be positive");
  if (cfg.buffer_capacity == 0) throw ConfigError("buffer must be positive");
  if (cfg.ddpg_batch == 0) throw ConfigError("ddpg_batch must be positive");
  if (cfg.ema_window == 0) throw ConfigError("ema_window must be positive");
  if (cfg.total_cycles < 0) throw ConfigError("total_cycles must be >= 0");
  if (cfg.sample_every < 0) throw ConfigError("sample_every must be >= 0");
  if (cfg.mixture_modes < 2) throw ConfigError("mixture_modes must be >= 2");
  if (!(cfg.mixture_sigma > 0.0)) throw ConfigError("mixture_sigma must be positive");
  if (!(cfg.mixture_radius > 0.0)) throw ConfigError("mixture_radius must be positive");
}

std::string config_snapshot(const FscoConfig& cfg) {
  std::ostringstream os;
  os << "preset = " << cfg.preset << "\n";
  os << "dataset = " << cfg.dataset << "\n";
  os << "eta_g = " << format_double(cfg.eta_g) << "\n";
  os << "eta_d_base = " << format_double(cfg.eta_d_base) << "\n";
  os << "u_floor = " << format_double(cfg.u_floor) << "\n";
  os << "batch = " << cfg.batch << "\n";
  os << "noise_dim = " << cfg.noise_dim << "\n";
  os << "g_hidden = " << size_list_str(cfg.g_hidden) << "\n";
  os << "d_hidden = " << size_list_str(cfg.d_hidden) << "\n";
  os << "d_loss_halved = " << (cfg.d_loss_halved ? "true" : "false") << "\n";
  os << "g_loss_form = "
     << (cfg.g_loss_form == GLossForm::kNonSaturating ? "non_saturating" : "minmax")
     << "\n";
  os << "total_cycles = " << cfg.total_cycles << "\n";
  os << "ema_window = " << cfg.ema_window << "\n";
  os << "gamma = " << format_double(cfg.gamma) << "\n";
  os << "tau = " << format_double(cfg.tau) << "\n";
  os << "actor_lr = " << format_double(cfg.actor_lr) << "\n";
  os << "critic_lr = " << format_double(cfg.critic_lr) << "\n";
  os << "noise = " << format_double(cfg.noise_sigma) << "\n";
  os << "buffer = " << cfg.buffer_capacity << "\n";
  os << "ddpg_batch = " << cfg.ddpg_batch << "\n";
  os << "actor_hidden = " << size_list_str(cfg.actor_hidden) << "\n";
  os << "critic_hidden = " << size_list_str(cfg.critic_hidden) << "\n";
  if (!cfg.mnist_images.empty()) os << "mnist_images = " << cfg.mnist_images << "\n";
  if (!cfg.mnist_labels.empty()) os << "mnist_labels = " << cfg.mnist_labels << "\n";
  os << "mixture_modes = " << cfg.mixture_modes << "\n";
  os << "mixture_radius = " << format_double(cfg.mixture_radius) << "\n";
  os << "mixture_sigma = " << format_double(cfg.mixture_sigma) << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "sample_every = " << cfg.sample_every << "\n";
  os << "sample_count = " << cfg.sample_count << "\n";
  return os.str();
}

}  // namespace fsco
