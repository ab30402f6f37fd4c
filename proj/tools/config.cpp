#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "efs/errors.hpp"

namespace efs::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty() ||
      !std::isfinite(v)) {
    throw InvalidInput(key + " must be a finite number, got '" + value + "'");
  }
  return v;
}

std::uint64_t to_count(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw InvalidInput(key + " must be a non-negative integer, got '" + value + "'");
  }
  return v;
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "gamma", "k",    "T",        "beta",          "epsilon", "s", "n", "seed",
      "dataset", "noise", "grad_tol", "snapshot_mode", "mode",    "m"};
  return k;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "gamma") {
    gamma = to_real(key, value);
    if (gamma < 0.0) throw InvalidInput("gamma must be >= 0");
  } else if (key == "k") {
    k = to_count(key, value);
    if (k < 1) throw InvalidInput("k must be >= 1");
  } else if (key == "T") {
    T = to_count(key, value);
    if (T < 1) throw InvalidInput("T must be >= 1");
  } else if (key == "beta") {
    beta = to_real(key, value);
    if (beta <= 0.0) throw InvalidInput("beta must be positive");
  } else if (key == "epsilon") {
    epsilon = to_real(key, value);
    if (epsilon < 0.0) throw InvalidInput("epsilon must be >= 0");
  } else if (key == "s") {
    if (value != "d-2") {
      if (to_real(key, value) < 0.0) throw InvalidInput("s must be >= 0");
    }
    s = value;
  } else if (key == "n") {
    n = to_count(key, value);
    if (n < 2) throw InvalidInput("n must be >= 2");
  } else if (key == "seed") {
    seed = to_count(key, value);
  } else if (key == "dataset") {
    if (value != "mixture" && value != "swiss") {
      throw InvalidInput("dataset must be 'mixture' or 'swiss', got '" + value + "'");
    }
    dataset = value;
  } else if (key == "noise") {
    noise = to_real(key, value);
    if (noise < 0.0) throw InvalidInput("noise must be >= 0");
  } else if (key == "grad_tol") {
    grad_tol = to_real(key, value);
    if (grad_tol < 0.0) throw InvalidInput("grad_tol must be >= 0");
  } else if (key == "snapshot_mode") {
    snapshot_mode = parse_snapshot_mode(value);
  } else if (key == "mode") {
    mode = parse_augment_mode(value);
  } else if (key == "m") {
    m = to_count(key, value);
    if (m < 1) throw InvalidInput("m must be >= 1");
  } else {
    throw InvalidInput("unknown configuration key '" + key + "'");
  }
  assigned.insert(key);
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const InvalidInput& e) {
      throw InvalidInput(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

double RunConfig::resolve_s(std::size_t d) const {
  if (s == "d-2") {
    if (d < 2) throw InvalidInput("s = d-2 needs d >= 2");
    return static_cast<double>(d) - 2.0;
  }
  return to_real("s", s);
}

PotentialParams RunConfig::potential(std::size_t d) const {
  PotentialParams p{resolve_s(d), epsilon};
  p.validate();
  return p;
}

void RunConfig::require_positive_gamma() const {
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be positive");
}

BackwardConfig RunConfig::backward() const {
  BackwardConfig cfg;
  cfg.gamma = gamma;
  cfg.beta = beta;
  cfg.T = T;
  cfg.grad_tol = grad_tol;
  cfg.snapshot_mode = snapshot_mode;
  return cfg;
}

}  // namespace efs::cli
