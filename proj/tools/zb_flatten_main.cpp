// Flattener for the MiniZinc subset emitted by omt2mzn. Usable as the
// compiler behind emzn2fzn: zb-flatten {mzn} -o {fzn}

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "zinc_bridge/flatten.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Flatten a MiniZinc model (omt2mzn subset) to FlatZinc.", "zb-flatten"};
  std::string input, output;
  app.add_option("input", input, "MiniZinc model")->required();
  app.add_option("-o,--output,--fzn", output, "Output FlatZinc (standard output when omitted)");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(input, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << input << "'\n";
    return 1;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string fzn;
  try {
    fzn = zb::flatten::flatten_text(ss.str());
  } catch (const zb::ParseError& e) {
    std::cerr << input << ":" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << input << ": " << e.what() << "\n";
    return 3;
  }
  if (output.empty() || output == "-") {
    std::cout << fzn;
    return 0;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out || !(out << fzn)) {
    std::cerr << "error: cannot write '" << output << "'\n";
    return 1;
  }
  return 0;
}
