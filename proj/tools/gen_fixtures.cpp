#include "fixture_gen.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : SECTORIUM_FIXTURE_DIR;
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : sectorium::fixtures::fixture_files()) {
    std::ofstream(dir / name) << content.dump(2) << "\n";
    std::cout << (dir / name).string() << "\n";
  }
}
