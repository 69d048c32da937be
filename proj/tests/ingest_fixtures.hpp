#pragma once

// Hand-built telemetry tables and the forests they must produce.

#include <cstdint>
#include <string>
#include <vector>

#include "pathmatch/tree.hpp"

namespace testing {

struct ExpectedTree {
  std::vector<std::int64_t> parents;
  std::vector<pathmatch::Label> labels;
  std::vector<std::string> pids;
};

// Exact repeat, a second parent, an orphan, a 3-cycle with a tail, a
// self-loop, blank names and users.
inline const char* kMessyTable =
    "pid_hash,parent_pid_hash,process_name,user_name\n"
    "r1,,explorer.exe,alice\n"
    "c1,r1,cmd.exe,alice\n"
    "c1,r1,cmd.exe,alice\n"
    "c2,r1,,alice\n"
    "g1,c1,powershell.exe,\n"
    "g1,c2,powershell.exe,\n"
    "o1,ghost,svchost.exe,SYSTEM\n"
    "o2,o1,unknown,SYSTEM\n"
    "k1,k3,a.exe,bob\n"
    "k2,k1,b.exe,bob\n"
    "k3,k2,c.exe,bob\n"
    "k4,k2,d.exe,bob\n"
    "s1,s1,self.exe,carol\n";

inline std::vector<ExpectedTree> messy_forest() {
  return {
      {{-1, 0, 0, 1},
       {{"explorer.exe", "alice"}, {"cmd.exe", "alice"}, {"", "alice"}, {"powershell.exe", ""}},
       {"r1", "c1", "c2", "g1"}},
      {{-1, 0}, {{"svchost.exe", "SYSTEM"}, {"unknown", "SYSTEM"}}, {"o1", "o2"}},
      {{-1, 0, 1, 1},
       {{"a.exe", "bob"}, {"b.exe", "bob"}, {"c.exe", "bob"}, {"d.exe", "bob"}},
       {"k1", "k2", "k3", "k4"}},
      {{-1}, {{"self.exe", "carol"}}, {"s1"}},
  };
}

inline const char* kTwoPairsTable =
    "pid_hash,parent_pid_hash,process_name,user_name\n"
    "a,,init,root\n"
    "b,a,sh,root\n"
    "c,,init,root\n"
    "d,c,sh,root\n";

// The parent of x never appears as a pid.
inline const char* kOrphanTable =
    "pid_hash,parent_pid_hash,process_name,user_name\n"
    "x,p0,bash,dev\n"
    "y,x,make,dev\n"
    "z,p9,cron,root\n";

}  // namespace testing
