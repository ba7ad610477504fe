#pragma once

#include <optional>
#include <string>
#include <vector>

#include "confspec/discretization.hpp"

namespace confspec::cli {

// sphere:n=4,r=1,N=64
// torus:n=4,L=1,modes=8          (L=1/2/1/1 gives per-axis lengths)
// icosphere:level=4,r=1
// ellipsoid:level=4,axes=1/1/1.5
// revolution:nu=32,nv=16,R=2,r=0.7
// genus2:nu=24,nv=12
// off:path=mesh.off
struct ModelSpec {
  std::string kind;
  int n = 0;
  double radius = 1.0;
  int nodes = 64;
  std::vector<double> lengths;
  int modes = 8;
  int level = 3;
  std::vector<double> axes{1.0, 1.0, 1.0};
  int nu = 24, nv = 12;
  double major = 2.0, minor = 0.7;
  std::string path;
  std::string text;  // the original string

  bool is_mesh() const { return kind != "sphere" && kind != "torus"; }
  SpacePtr build() const;
  ModelManifold manifold() const;
};

// const:0.2 | cos:amp=0.3,mode=1 | file:path
struct DeformationSpec {
  std::string kind = "const";
  double value = 0.0;
  double amplitude = 0.0;
  int mode = 1;
  std::string path;
  std::string text = "const:0";

  ScalarField sample(const DiscreteSpace& space) const;
};

// cos:modes=1..3,amp=0..0.5:11
// random:count=50,amp=0.5,modes=4
// const:c=-1..1:5
struct FamilySpec {
  std::string kind;
  std::vector<int> modes;
  std::vector<double> amplitudes;
  int count = 0;
  double max_amplitude = 0.5;
  int max_mode = 4;
  std::string text;

  // One field per case, in case order; `seed` drives the random family.
  std::vector<std::pair<std::string, ScalarField>> expand(const DiscreteSpace& space, std::uint64_t seed) const;
};

// Each parser throws ConfigError listing every problem it found.
ModelSpec parse_model(const std::string& s);
DeformationSpec parse_deformation(const std::string& s);
FamilySpec parse_family(const std::string& s);

// "a..b:k" -> k evenly spaced values; "a..b" on integers -> a, a+1, .., b; "x" -> {x}.
std::vector<double> parse_grid(const std::string& s);
std::vector<int> parse_int_range(const std::string& s);

}  // namespace confspec::cli
