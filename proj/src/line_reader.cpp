#include "geocentroid/line_reader.hpp"

#include <stdexcept>

#include <zlib.h>

namespace geocentroid {

namespace {
constexpr std::size_t kChunkSize = 1 << 16;

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}
}  // namespace

FileLineReader::FileLineReader(const std::string& path) : path_(path) {
  // zlib reads plain files transparently; gzip input is detected by its
  // magic bytes.
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) {
    throw std::runtime_error("cannot open input file: " + path);
  }
  gzbuffer(f, kChunkSize);
  file_ = f;
}

FileLineReader::~FileLineReader() {
  if (file_ != nullptr) gzclose(static_cast<gzFile>(file_));
}

bool FileLineReader::fill() {
  if (eof_) return false;
  buffer_.resize(kChunkSize);
  const int n = gzread(static_cast<gzFile>(file_), buffer_.data(), kChunkSize);
  if (n < 0) {
    int errnum = 0;
    const char* msg = gzerror(static_cast<gzFile>(file_), &errnum);
    throw std::runtime_error("error reading " + path_ + ": " +
                             (errnum == Z_ERRNO ? "I/O error" : msg));
  }
  buffer_.resize(static_cast<std::size_t>(n));
  pos_ = 0;
  if (n == 0) {
    eof_ = true;
    return false;
  }
  return true;
}

bool FileLineReader::next(std::string& line) {
  line.clear();
  bool got_any = false;
  for (;;) {
    if (pos_ >= buffer_.size() && !fill()) break;
    got_any = true;
    const std::size_t nl = buffer_.find('\n', pos_);
    if (nl == std::string::npos) {
      line.append(buffer_, pos_, buffer_.size() - pos_);
      pos_ = buffer_.size();
      continue;
    }
    line.append(buffer_, pos_, nl - pos_);
    pos_ = nl + 1;
    strip_cr(line);
    ++line_number_;
    return true;
  }
  if (!got_any && line.empty()) return false;
  strip_cr(line);
  ++line_number_;
  return true;
}

bool StringLineReader::next(std::string& line) {
  if (pos_ >= data_.size()) return false;
  const std::size_t nl = data_.find('\n', pos_);
  const std::size_t end = nl == std::string::npos ? data_.size() : nl;
  line.assign(data_, pos_, end - pos_);
  pos_ = nl == std::string::npos ? data_.size() : nl + 1;
  strip_cr(line);
  ++line_number_;
  return true;
}

}  // namespace geocentroid
