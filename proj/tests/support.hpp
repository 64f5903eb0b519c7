#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "oracle.hpp"
#include "solch/tower.hpp"

namespace support {

inline oracle::RawTower raw(const solch::ChainTower& t) {
  oracle::RawTower r;
  for (std::size_t l = 0; l <= t.depth(); ++l) {
    r.gens.push_back(t.images(l));
    r.proj.push_back(t.projection(l));
  }
  return r;
}

struct RunResult {
  int status = -1;
  std::string out;
};

/// Runs a shell command, capturing stdout.
inline RunResult run(const std::string& command) {
  static int counter = 0;
  std::string path = "solch_test_out_" + std::to_string(++counter) + ".txt";
  int rc = std::system((command + " > " + path + " 2>/dev/null").c_str());
  RunResult r;
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(path.c_str());
  return r;
}

}  // namespace support
