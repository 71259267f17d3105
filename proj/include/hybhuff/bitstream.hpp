#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hybhuff {

// A packed sequence of bits, most-significant bit first within each byte.
// Bits past bit_length in the final byte are zero.
struct BitStream {
  std::vector<std::uint8_t> bytes;
  std::uint64_t bit_length = 0;

  std::size_t byte_length() const noexcept { return bytes.size(); }
  bool operator==(const BitStream&) const = default;
};

// Smallest b with 2^b > max_value, and 1 when max_value is 0.
unsigned bitwidth_for(std::uint64_t max_value) noexcept;

// Appends fixed-width fields through a 64-bit register that is flushed to
// the byte buffer whenever it fills.
class BitWriter {
 public:
  // Writes the low `width` bits of `value`, MSB first. width in [0, 64].
  void write(std::uint64_t value, unsigned width);
  void write_bit(bool bit) { write(bit ? 1u : 0u, 1); }

  std::uint64_t bit_length() const noexcept { return bytes_.size() * 8 + filled_; }

  // Flushes the register, zero-padding to the next byte boundary.
  BitStream finish() &&;

 private:
  void flush_word();

  std::vector<std::uint8_t> bytes_;
  std::uint64_t reg_ = 0;
  unsigned filled_ = 0;
};

// Forward-only cursor over a bit buffer. Independent readers over the same
// bytes never interfere.
class BitReader {
 public:
  BitReader() = default;
  BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_length,
            std::string segment = "bitstream");
  explicit BitReader(const BitStream& stream, std::string segment = "bitstream")
      : BitReader(stream.bytes, stream.bit_length, std::move(segment)) {}

  // Reads `width` bits (0..64) as an unsigned integer; throws DecodeError
  // naming this reader's segment when fewer bits remain.
  std::uint64_t read(unsigned width);
  bool read_bit();

  std::uint64_t position() const noexcept { return pos_; }
  std::uint64_t bit_length() const noexcept { return bit_length_; }
  std::uint64_t remaining() const noexcept { return bit_length_ - pos_; }
  bool exhausted() const noexcept { return pos_ == bit_length_; }
  const std::string& segment() const noexcept { return segment_; }

 private:
  [[noreturn]] void truncated(unsigned wanted) const;

  std::span<const std::uint8_t> bytes_;
  std::uint64_t bit_length_ = 0;
  std::uint64_t pos_ = 0;
  std::string segment_;
};

// Packs each value into exactly `width` bits. Values that do not fit are
// rejected with a Range error rather than masked.
BitStream pack(std::span<const std::uint64_t> values, unsigned width);
BitStream pack(std::span<const std::uint32_t> values, unsigned width);

// Reads `count` fields of `width` bits from the start of `stream`.
std::vector<std::uint64_t> unpack(const BitStream& stream, unsigned width, std::size_t count);

}  // namespace hybhuff
