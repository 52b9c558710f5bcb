#pragma once

namespace dwol {

const char* version_string();

}  // namespace dwol
