#pragma once

#include <cstdint>
#include <string>

namespace wtensor::cli {

/// Exit codes shared by every command.
enum Exit : int { kOk = 0, kFailure = 1, kNotCopositive = 2, kNotExtendedZ = 3 };

struct SourceOptions {
  std::string input;       ///< tensor JSON
  std::string hypergraph;  ///< edge-list file
  std::string gen;         ///< generator spec
  bool laplacian = false;
  bool signless = false;
};

struct MaxEigOptions {
  SourceOptions source;
  std::string method = "auto";
  double tol = 1e-8;
  int max_iter = 200;
  std::string decomposition;
  std::string certificate;
  std::string report;
  std::string dump_sdp;
  bool json = false;
  bool timings = false;
  bool verbose = false;
  int starts = 50;
  std::uint64_t seed = 42;
};

struct CopositiveOptions {
  SourceOptions source;
  std::string method = "block";
  double tol = 1e-8;
  std::string certificate;
  std::string report;
  bool json = false;
  bool timings = false;
};

struct GenOptions {
  std::string kind;
  int m = 4;
  int k = 2;
  int n = 0;
  int s = 0;
  double M = 0.0;
  std::uint64_t seed = 1;
  std::string tree;
  std::string tensor = "laplacian";
  std::string out;
  std::string edges;
  std::string decomposition;
};

struct TableOptions {
  int which = 1;
  double scale = 1.0;
  int max_n = 0;  ///< 0: default cap times scale
  int max_k = 0;
  int m = 0;  ///< 0: the table's own default
  int s = 10;
  int k = 5;
  int trials = 0;
  std::string grid = "6,9,12,15";
  std::uint64_t seed = 1;
  std::string csv;
  bool timings = false;
};

int cmd_max_eig(const MaxEigOptions& o, const std::string& echo);
int cmd_copositive(const CopositiveOptions& o, const std::string& echo);
int cmd_gen(const GenOptions& o);
int cmd_table(const TableOptions& o);

}  // namespace wtensor::cli
