#include <cstdio>

#include "corkforge/version.hpp"

int main() {
  std::printf("corkforge %s (cli under construction)\n", corkforge::version);
  return 0;
}
