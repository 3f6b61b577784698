#pragma once

#include <cstddef>
#include <string>

namespace geocentroid {

/// Sequential line source. next() strips the trailing newline (and a CR
/// before it); line_number() refers to the line most recently returned,
/// 1-based. Not thread-safe; a single producer reads and fans lines out.
class LineReader {
 public:
  virtual ~LineReader() = default;

  /// False at end of input. Throws std::runtime_error on a read failure.
  virtual bool next(std::string& line) = 0;

  std::size_t line_number() const { return line_number_; }

 protected:
  std::size_t line_number_ = 0;
};

/// Reads a file line by line, decompressing transparently when the content
/// starts with the gzip magic bytes.
class FileLineReader final : public LineReader {
 public:
  explicit FileLineReader(const std::string& path);  // throws if unreadable
  ~FileLineReader() override;

  FileLineReader(const FileLineReader&) = delete;
  FileLineReader& operator=(const FileLineReader&) = delete;

  bool next(std::string& line) override;

 private:
  bool fill();

  std::string path_;
  void* file_ = nullptr;  // gzFile
  std::string buffer_;
  std::size_t pos_ = 0;
  bool eof_ = false;
};

/// In-memory source for tests and fixtures.
class StringLineReader final : public LineReader {
 public:
  explicit StringLineReader(std::string data) : data_(std::move(data)) {}

  bool next(std::string& line) override;

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

}  // namespace geocentroid
