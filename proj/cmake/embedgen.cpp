// Usage: embedgen <output.cpp> <data-root> <relative-file>...
// Emits a translation unit defining orgtrace::detail::embedded_table().

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: embedgen <out.cpp> <root> files...\n";
    return 2;
  }
  std::ofstream out(argv[1], std::ios::binary);
  const std::filesystem::path root = argv[2];
  out << "// Generated by embedgen. Do not edit.\n"
         "#include \"orgtrace/embedded.hpp\"\n\n"
         "namespace orgtrace::detail {\nnamespace {\n";
  std::vector<std::string> names;
  for (int i = 3; i < argc; ++i) {
    std::ifstream in(root / argv[i], std::ios::binary);
    if (!in) {
      std::cerr << "embedgen: cannot read " << argv[i] << "\n";
      return 1;
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    out << "const unsigned char blob" << names.size() << "[] = {";
    for (std::size_t k = 0; k < bytes.size(); ++k) {
      if (k % 24 == 0) out << "\n";
      out << static_cast<unsigned>(static_cast<unsigned char>(bytes[k])) << ",";
    }
    out << "0};\n";
    out << "constexpr std::size_t blob" << names.size() << "_size = " << bytes.size() << ";\n";
    names.emplace_back(argv[i]);
  }
  out << "}  // namespace\n\n"
         "std::span<const EmbeddedFile> embedded_table() {\n"
         "  static const EmbeddedFile table[] = {\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << "    {\"" << names[i] << "\", std::string_view(reinterpret_cast<const char*>(blob" << i
        << "), blob" << i << "_size)},\n";
  }
  if (names.empty()) out << "    {\"\", {}},\n";
  out << "  };\n  return {table, " << names.size() << "};\n}\n\n}  // namespace orgtrace::detail\n";
  return 0;
}
