// Regenerates the shipped model files from the fixture builders:
//   write_fixtures <models-dir>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "colliderbn/fixtures.hpp"
#include "colliderbn/model_io.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: write_fixtures <models-dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  for (const auto& name : colliderbn::fixture_names()) {
    const auto path = dir / (name + ".json");
    std::ofstream out(path, std::ios::binary);
    out << colliderbn::serialize_model(colliderbn::build_fixture(name));
    if (!out) {
      std::cerr << "cannot write " << path << "\n";
      return 1;
    }
    std::cout << path.string() << "\n";
  }
  return 0;
}
