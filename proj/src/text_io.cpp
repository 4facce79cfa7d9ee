#include "kgwalk/text_io.hpp"

#include <zlib.h>

#include "kgwalk/errors.hpp"

namespace kgwalk {

namespace fs = std::filesystem;

bool has_gzip_suffix(const fs::path& path) { return path.extension() == ".gz"; }

LineReader::LineReader(const fs::path& path) : path_(path) {
  if (!fs::exists(path)) throw IoError("no such file: " + path.string());
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw IoError("cannot open for reading: " + path.string());
  gzbuffer(f, 1 << 17);
  handle_ = f;
}

LineReader::~LineReader() {
  if (handle_ != nullptr) gzclose(static_cast<gzFile>(handle_));
}

std::optional<std::string> LineReader::next() {
  auto f = static_cast<gzFile>(handle_);
  std::string line;
  char buf[8192];
  bool any = false;
  while (gzgets(f, buf, sizeof buf) != nullptr) {
    any = true;
    line.append(buf);
    if (!line.empty() && line.back() == '\n') break;
  }
  if (!any) {
    int err = Z_OK;
    const char* msg = gzerror(f, &err);
    if (err != Z_OK && err != Z_STREAM_END) {
      throw IoError("read error in " + path_.string() + ": " + msg, line_number_);
    }
    return std::nullopt;
  }
  ++line_number_;
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
  return line;
}

fs::path AtomicWriter::partial_path(const fs::path& path) {
  return fs::path(path.string() + ".incomplete");
}

AtomicWriter::AtomicWriter(fs::path path) : path_(std::move(path)), partial_(partial_path(path_)) {
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
  // "T" selects transparent (uncompressed) writing.
  const char* mode = has_gzip_suffix(path_) ? "wb6" : "wbT";
  gzFile f = gzopen(partial_.c_str(), mode);
  if (f == nullptr) throw IoError("cannot open for writing: " + partial_.string());
  gzbuffer(f, 1 << 17);
  handle_ = f;
}

AtomicWriter::~AtomicWriter() {
  if (handle_ != nullptr) gzclose(static_cast<gzFile>(handle_));
}

void AtomicWriter::write(std::string_view data) {
  if (data.empty()) return;
  if (committed_) throw ContractViolation("write after commit: " + path_.string());
  int n = gzwrite(static_cast<gzFile>(handle_), data.data(), static_cast<unsigned>(data.size()));
  if (n <= 0 || static_cast<std::size_t>(n) != data.size()) {
    throw IoError("write failed: " + partial_.string());
  }
}

void AtomicWriter::commit() {
  if (committed_) return;
  int rc = gzclose(static_cast<gzFile>(handle_));
  handle_ = nullptr;
  if (rc != Z_OK) throw IoError("close failed: " + partial_.string());
  std::error_code ec;
  fs::rename(partial_, path_, ec);
  if (ec) throw IoError("rename failed: " + partial_.string() + ": " + ec.message());
  committed_ = true;
}

std::string read_file(const fs::path& path) {
  LineReader reader(path);
  std::string out;
  while (auto line = reader.next()) {
    out += *line;
    out += '\n';
  }
  return out;
}

void write_file(const fs::path& path, std::string_view data) {
  AtomicWriter w(path);
  w.write(data);
  w.commit();
}

}  // namespace kgwalk
