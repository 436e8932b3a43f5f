#pragma once

#include <cmath>
#include <cstdio>
#include <string>

// Tiny harness for the acceptance suite: one labelled check per line, one
// verdict line per criterion.
struct Acceptance {
  bool ok = true;

  void item(bool pass, const std::string& label, const std::string& detail) {
    ok = ok && pass;
    std::printf("  [%s] %-42s %s\n", pass ? "pass" : "FAIL", label.c_str(),
                detail.c_str());
    std::fflush(stdout);
  }

  void value(const std::string& label, double got, double ref, double tol) {
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "got %.8g, reference %.8g, |err| %.2e <= %.0e", got, ref,
                  std::abs(got - ref), tol);
    item(std::abs(got - ref) <= tol, label, detail);
  }

  void upper(const std::string& label, double got, double bound) {
    char detail[160];
    std::snprintf(detail, sizeof(detail), "got %.8g <= %.8g", got, bound);
    item(got <= bound, label, detail);
  }

  void count(const std::string& label, long got, long bound) {
    char detail[160];
    std::snprintf(detail, sizeof(detail), "got %ld <= %ld", got, bound);
    item(got <= bound, label, detail);
  }

  void in_range(const std::string& label, double got, double lo, double hi) {
    char detail[160];
    std::snprintf(detail, sizeof(detail), "got %.8g in [%g, %g]", got, lo, hi);
    item(got >= lo && got <= hi, label, detail);
  }
};

void criterion1(Acceptance& a);
void criterion2(Acceptance& a);
void criterion3(Acceptance& a);
void criterion4(Acceptance& a);
void criterion5(Acceptance& a);
void criterion6(Acceptance& a);
