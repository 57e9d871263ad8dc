// Command-line front end. Subcommands are registered at the bottom of the
// file; each one parses its flags with CLI11, does the work through the
// library, and writes JSON (and optionally OBJ/SVG) to the requested paths.
#include <cstdio>

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::fprintf(stderr, "geoweave: not wired up yet\n");
  return 1;
}
