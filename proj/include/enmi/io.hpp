#pragma once

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include <unistd.h>

namespace enmi {

/// Shortest decimal string that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("parse_double: invalid number '" + std::string(s) + "'");
  return v;
}

/// Writes content to `path` atomically: temp file in the same directory,
/// then rename. No partial output survives a failure.
inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : ".";
  if (!std::filesystem::exists(dir))
    throw std::runtime_error("atomic_write_file: directory does not exist: " + dir.string());
  std::filesystem::path tmp = dir / (path.filename().string() + ".tmp.XXXXXX");
  std::string tmp_str = tmp.string();
  const int fd = ::mkstemp(tmp_str.data());
  if (fd < 0) throw std::runtime_error("atomic_write_file: cannot create temp file in " + dir.string());
  ::close(fd);
  try {
    {
      std::ofstream out(tmp_str, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("atomic_write_file: cannot open temp file");
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      if (!out) throw std::runtime_error("atomic_write_file: short write");
    }
    std::filesystem::rename(tmp_str, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp_str, ec);
    throw;
  }
}

}  // namespace enmi
