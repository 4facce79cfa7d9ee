#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace kgwalk {

bool has_gzip_suffix(const std::filesystem::path& path);

// Line reader over a plain or gzip-compressed file. Compression is chosen
// by the `.gz` suffix. Trailing CR/LF is stripped from every line.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  std::optional<std::string> next();
  std::size_t line_number() const noexcept { return line_number_; }

 private:
  void* handle_ = nullptr;  // gzFile
  std::filesystem::path path_;
  std::size_t line_number_ = 0;
};

// Writes to `<path>.incomplete` and renames onto `path` in commit(). A writer
// destroyed without commit() leaves the suffixed partial file behind.
class AtomicWriter {
 public:
  explicit AtomicWriter(std::filesystem::path path);
  ~AtomicWriter();
  AtomicWriter(const AtomicWriter&) = delete;
  AtomicWriter& operator=(const AtomicWriter&) = delete;

  void write(std::string_view data);
  void commit();

  const std::filesystem::path& path() const noexcept { return path_; }
  static std::filesystem::path partial_path(const std::filesystem::path& path);

 private:
  void* handle_ = nullptr;  // gzFile
  std::filesystem::path path_;
  std::filesystem::path partial_;
  bool committed_ = false;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

}  // namespace kgwalk
