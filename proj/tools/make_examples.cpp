// Writes the example inputs under the given directory (default: data).
#include "unispace/io.hpp"

#include <filesystem>
#include <iostream>

using namespace unispace;
using io::json;

namespace {

json form(int n, int k, std::map<std::string, std::string> coeffs) {
  return {{"chart_dim", n}, {"degree", k}, {"coeffs", coeffs}};
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir);
  auto put = [&](const char* name, const json& j) {
    io::write_file((dir / name).string(), j);
    std::cout << (dir / name).string() << "\n";
  };

  put("torus_bcc3.json", io::to_json(bcc_torus(3)));
  put("tetrahedron_boundary.json", io::to_json(regular_tetrahedron_boundary()));
  put("simplex3.json", io::to_json(standard_simplex(3)));

  put("torus_omega.json", form(3, 3, {{"1,2,3", "sin(2*pi*x1)"}}));
  put("torus_phi.json", form(3, 2, {{"2,3", "-cos(2*pi*x1)/(2*pi)"}}));
  put("zero_phi.json", form(3, 2, {}));
  put("simplex_omega.json", form(3, 3, {{"1,2,3", "1 + x1*x2 - 3*x3^2"}}));
  put("sphere_phi.json", form(3, 1, {{"1", "x2*x3"}, {"2", "x1^2"}, {"3", "-x1*x2"}}));

  put("beta_2_3.json", io::to_json(standard_beta<Rational>(2, 3)));
  put("subspace_1245.json", io::to_json(Subspace::coordinate(6, {0, 1, 3, 4})));
  return 0;
}
