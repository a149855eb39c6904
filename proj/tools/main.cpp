#include <iostream>

#include "cli.hpp"
#include "rtn/errors.hpp"

int main(int argc, char** argv) {
  rtncli::RunManifest manifest;
  const rtncli::ParseOutcome parsed = rtncli::parse_args(argc, argv, manifest, std::cerr);
  if (!parsed.proceed) return parsed.exit_code;
  try {
    return rtncli::run_manifest(manifest, std::cout, std::cerr);
  } catch (const rtn::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
