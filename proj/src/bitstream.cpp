#include "hybhuff/bitstream.hpp"

#include <algorithm>
#include <bit>

#include "hybhuff/error.hpp"

namespace hybhuff {

namespace {

constexpr std::uint64_t low_mask(unsigned width) noexcept {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

template <typename T>
BitStream pack_impl(std::span<const T> values, unsigned width) {
  if (width > 64) throw Error(ErrorKind::Domain, "bit width " + std::to_string(width) + " exceeds 64");
  BitWriter writer;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint64_t v = values[i];
    if (v > low_mask(width)) {
      throw Error(ErrorKind::Range, "value " + std::to_string(v) + " at index " + std::to_string(i) +
                                        " does not fit in " + std::to_string(width) + " bits");
    }
    writer.write(v, width);
  }
  return std::move(writer).finish();
}

}  // namespace

unsigned bitwidth_for(std::uint64_t max_value) noexcept {
  return max_value == 0 ? 1u : static_cast<unsigned>(std::bit_width(max_value));
}

void BitWriter::write(std::uint64_t value, unsigned width) {
  if (width == 0) return;
  value &= low_mask(width);
  const unsigned space = 64 - filled_;
  if (width <= space) {
    reg_ = width == 64 ? value : (reg_ << width) | value;
    filled_ += width;
    if (filled_ == 64) flush_word();
    return;
  }
  // Split across the register boundary: the high part completes this word.
  const unsigned rest = width - space;
  reg_ = (reg_ << space) | (value >> rest);
  flush_word();
  reg_ = value & low_mask(rest);
  filled_ = rest;
}

void BitWriter::flush_word() {
  for (int shift = 56; shift >= 0; shift -= 8) {
    bytes_.push_back(static_cast<std::uint8_t>(reg_ >> shift));
  }
  reg_ = 0;
  filled_ = 0;
}

BitStream BitWriter::finish() && {
  BitStream out;
  out.bit_length = bit_length();
  if (filled_ > 0) {
    const std::uint64_t aligned = reg_ << (64 - filled_);
    const unsigned tail_bytes = (filled_ + 7) / 8;
    for (unsigned i = 0; i < tail_bytes; ++i) {
      bytes_.push_back(static_cast<std::uint8_t>(aligned >> (56 - 8 * i)));
    }
  }
  out.bytes = std::move(bytes_);
  reg_ = 0;
  filled_ = 0;
  return out;
}

BitReader::BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_length, std::string segment)
    : bytes_(bytes), bit_length_(bit_length), segment_(std::move(segment)) {
  if (bit_length_ > bytes_.size() * 8) {
    throw DecodeError(segment_, "declared " + std::to_string(bit_length_) + " bits but only " +
                                    std::to_string(bytes_.size()) + " bytes present");
  }
}

void BitReader::truncated(unsigned wanted) const {
  throw DecodeError(segment_, "truncated: needed " + std::to_string(wanted) + " bits at position " +
                                  std::to_string(pos_) + " of " + std::to_string(bit_length_));
}

std::uint64_t BitReader::read(unsigned width) {
  if (width == 0) return 0;
  if (width > 64) throw Error(ErrorKind::Domain, "bit width exceeds 64");
  if (remaining() < width) truncated(width);
  std::uint64_t result = 0;
  while (width > 0) {
    const std::uint8_t byte = bytes_[pos_ >> 3];
    const unsigned avail = 8 - static_cast<unsigned>(pos_ & 7);
    const unsigned take = std::min(avail, width);
    const unsigned bits = (byte >> (avail - take)) & ((1u << take) - 1);
    result = (result << take) | bits;
    pos_ += take;
    width -= take;
  }
  return result;
}

bool BitReader::read_bit() {
  if (pos_ >= bit_length_) truncated(1);
  const bool bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
  ++pos_;
  return bit;
}

BitStream pack(std::span<const std::uint64_t> values, unsigned width) { return pack_impl(values, width); }
BitStream pack(std::span<const std::uint32_t> values, unsigned width) { return pack_impl(values, width); }

std::vector<std::uint64_t> unpack(const BitStream& stream, unsigned width, std::size_t count) {
  BitReader reader(stream);
  if (width == 0 && count > 0) throw Error(ErrorKind::Domain, "zero bit width with non-zero count");
  if (width != 0 && count > reader.remaining() / width) {
    throw DecodeError(reader.segment(), "truncated: " + std::to_string(count) + " fields of " +
                                            std::to_string(width) + " bits exceed " +
                                            std::to_string(reader.remaining()) + " available bits");
  }
  std::vector<std::uint64_t> out(count);
  for (auto& v : out) v = reader.read(width);
  return out;
}

}  // namespace hybhuff
