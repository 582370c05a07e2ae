// Regenerates the checked-in defaults: data/default_config.json and
// data/pose_library.json. Usage: export_defaults <output-dir>
#include <iostream>

#include "handsynth/config.hpp"
#include "handsynth/pose_library.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: export_defaults <output-dir>\n";
    return 1;
  }
  const std::string dir = argv[1];
  handsynth::save_config(handsynth::GenerationConfig{}, dir + "/default_config.json");
  handsynth::PoseLibrary::builtin().save(dir + "/pose_library.json");
  std::cout << "wrote " << dir << "/default_config.json and " << dir
            << "/pose_library.json\n";
  return 0;
}
