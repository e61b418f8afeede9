// Placeholder entry point; subcommands are wired up once the verification
// harness lands.
#include <cstdio>

int main() {
  std::puts("graphindex: no subcommand given (try --help)");
  return 2;
}
