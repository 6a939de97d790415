// Regenerates the bundled JSON under assets/ from the in-code models.  Run
// from the repo root (or pass the assets dir); the unit tests pin the files
// byte-for-byte against the models, so edit models.hpp and rerun this rather
// than touching the JSON by hand.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "corkforge/kirby/moves.hpp"
#include "corkforge/recipes/models.hpp"

namespace fs = std::filesystem;
using namespace corkforge;
using namespace corkforge::kirby;
using namespace corkforge::recipes;

static void put(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "write failed: " << p << "\n";
    std::exit(1);
  }
  std::cout << p.string() << " (" << text.size() << " bytes)\n";
}

int main(int argc, char** argv) {
  fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("assets");
  put(root / "diagrams" / "cork_base.json", serialize_diagram(cork_base()));
  put(root / "diagrams" / "w_double.json", serialize_diagram(w_double().first));
  put(root / "diagrams" / "wn_family.json", serialize_family(wn_family()));
  put(root / "bands" / "wn_slide.json", serialize_band(wn_slide_band()));
  put(root / "certs" / "cork.json", cert_to_json(cork_certificate()).dump(2) + "\n");
  return 0;
}
