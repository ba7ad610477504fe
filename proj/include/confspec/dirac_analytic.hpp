#pragma once

#include <string>

#include <json.hpp>

#include "confspec/model_geometry.hpp"
#include "confspec/report.hpp"

namespace confspec {

enum class SpinStructure { Unique, Trivial };

std::string to_string(SpinStructure s);

// Closed-form Dirac data of a model spin manifold. Spheres carry their unique
// spin structure, tori the trivial one.
struct SpinModel {
  ModelManifold base;
  SpinStructure spin_structure;
  double lambda1_dirac;  // |first eigenvalue|
  bool killing;          // attained by a Killing spinor

  static SpinModel of(const ModelManifold& base);
  static SpinModel round_sphere(int n, double radius) { return of(ModelManifold::round_sphere(n, radius)); }
  static SpinModel flat_torus(int n, double side) { return of(ModelManifold::flat_torus(n, side)); }

  int dimension() const { return base.dimension(); }
  std::string closed_form() const;
};

double dirac_lambda1(const SpinModel& m);

// lambda_1(D)^2 >= n/(4(n-1)) inf R.
InequalityReport friedrich_check(const SpinModel& m, const Tolerances& tol = {});

// lambda_1(D)^2 >= n/(4(n-1)) lamL. With `probe`, lamL belongs to another
// metric of the conformal class and the comparison is reported, not judged.
// On surfaces the caller supplies inf R in place of lamL.
InequalityReport hijazi_check(const SpinModel& m, double lamL, const Tolerances& tol = {}, bool probe = false);

// Every model the registry can produce, with its closed form.
nlohmann::json registry_json();
nlohmann::json to_json(const SpinModel& m);

}  // namespace confspec
