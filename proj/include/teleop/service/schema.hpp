#pragma once

#include "teleop/service/wire.hpp"

#include <optional>
#include <string>
#include <vector>

namespace teleop {

enum class FieldType { U8, U32, U64, F64, Bytes };

struct SchemaField {
  std::string name;
  FieldType type;
  std::string unit;
  std::string enum_name;  // named enum or bitmask for U8 fields, else empty
  std::string length_field;  // Bytes: the U8 field holding the length
};

std::size_t field_size(FieldType t);  // 0 for Bytes
const char* to_string(FieldType t);

// Payload layout in wire order, header first.
const std::vector<SchemaField>& header_fields();
const std::vector<SchemaField>& body_fields(MessageKind kind);
inline constexpr std::size_t kHeaderSize = 14;  // version, kind, session, tick

// Byte offset of a body field within the payload, when it is fixed.
std::optional<std::size_t> body_offset(MessageKind kind, const std::string& name);
// Fixed payload size, or the minimum for messages with a variable field.
std::size_t min_payload_size(MessageKind kind);

// JSON schema document served to the console.
std::string wire_schema_json();
// Markdown byte-layout tables (docs/wire-protocol.md).
std::string wire_protocol_markdown();

}  // namespace teleop
