#pragma once

#include <string>
#include <vector>

#include "homsl/core.hpp"

namespace homsl {

// Line-oriented socket scripts:
//   let x = socket            let y = accept x        let m = receive x
//   bind x ...   connect x ...   listen x   send x ...   receive x   close x
//   pure
//   forever { ... }
//   loop k { ... }            k  (jump back to the start of loop k)
//   branch COND { ... } { ... }
// Arguments other than the socket are ignored, as are branch conditions.
// Comments start with "--" or "%". A leading "main = do" line is skipped.
struct Stmt {
  enum class Kind { Op, Socket, Accept, Forever, Loop, Continue, Branch, Pure };
  Kind kind = Kind::Pure;
  std::string op;    // Op: bind, connect, listen, send, receive, close
  std::string sock;  // socket operated on (Op, Accept)
  std::string name;  // bound socket (Socket, Accept) or loop label (Loop, Continue)
  std::vector<Stmt> body;
  std::vector<Stmt> alt;
  int line = 0;
};

struct SocketScript {
  std::vector<Stmt> stmts;
};

SocketScript parse_script(const std::string& text);

// Protocol states; the last one is Untracked.
const std::vector<std::string>& protocol_states();

// The program-independent clauses over the protocol signature. Socket
// labels are the constants s (tracked) and u (untracked); heads mention
// them through the guard predicates IsTracked and IsUntracked.
std::vector<Clause> protocol_clauses();
std::vector<Clause> label_clauses();
Program protocol_signature();

// Continuation-passing encoding of the script plus the protocol clauses,
// with goal "Untracked main". Provable means some socket violates the
// protocol.
Program compile_script(const SocketScript& s);

}  // namespace homsl
