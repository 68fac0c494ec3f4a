#include "aledg/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aledg {

void SimulationConfig::set(const std::string& key, const std::string& value) {
  if (key == "case") case_name = value;
  else if (key == "order") order = std::stoi(value);
  else if (key == "cfl") cfl = std::stod(value);
  else if (key == "tf" || key == "t_end") t_end = std::stod(value);
  else if (key == "motion") motion = value;
  else if (key == "relax") relax = value;
  else if (key == "omega") omega = std::stod(value);
  else if (key == "gamma") gamma = std::stod(value);
  else if (key == "mu") mu = std::stod(value);
  else if (key == "prandtl") prandtl = std::stod(value);
  else if (key == "mesh") mesh_file = value;
  else if (key == "nx") nx = std::stoi(value);
  else if (key == "ny") ny = std::stoi(value);
  else if (key == "out") out_dir = value;
  else if (key == "out_every") out_every = std::stoi(value);
  else if (key == "seed") seed = unsigned(std::stoul(value));
  else if (key == "walls") walls = (value == "1" || value == "true");
  else throw std::runtime_error("unknown config key: " + key);
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  SimulationConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) cfg.set(key, value);
  }
  return cfg;
}

}  // namespace aledg
