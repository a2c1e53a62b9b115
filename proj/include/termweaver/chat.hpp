#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace termweaver {

enum class Role { system, user, assistant };

std::string role_name(Role r);
Role role_from_name(const std::string& name);

struct ChatMessage {
  Role role = Role::user;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

nlohmann::ordered_json messages_to_json(const std::vector<ChatMessage>& messages);
std::vector<ChatMessage> messages_from_json(const nlohmann::json& arr);

}  // namespace termweaver
