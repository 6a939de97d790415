#include <cstdio>

int main() {
  std::printf("census_scout: nothing to do yet\n");
  return 0;
}
