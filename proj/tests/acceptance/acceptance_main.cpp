#include <cstdio>
#include <cstring>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  int which = 0;  // 0 = all
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      which = std::atoi(argv[++i]);
  }

  bool all_ok = true;
  for (int c = 1; c <= 6; ++c) {
    if (which != 0 && which != c) continue;
    std::printf("criterion %d:\n", c);
    Acceptance a;
    switch (c) {
      case 1: criterion1(a); break;
      case 2: criterion2(a); break;
      case 3: criterion3(a); break;
      case 4: criterion4(a); break;
      case 5: criterion5(a); break;
      case 6: criterion6(a); break;
    }
    std::printf("criterion %d: %s\n", c, a.ok ? "PASS" : "FAIL");
    all_ok = all_ok && a.ok;
  }
  return all_ok ? 0 : 1;
}
