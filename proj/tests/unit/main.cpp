#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "efs/log.hpp"

int main(int argc, char** argv) {
  efs::log::set_level(efs::log::Level::kError);
  doctest::Context ctx;
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
