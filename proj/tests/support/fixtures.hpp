#pragma once

// Taxonomy exemplar fixtures: one canonical snippet per pattern kind, each
// annotated with the kind and line a correct rule run must report.

#include <string>
#include <vector>

#include "loopscan/taxonomy.hpp"

namespace fixtures {

struct Exemplar {
    loopscan::PatternKind kind;
    int expected_line;
    std::string source;
};

inline const std::vector<Exemplar>& taxonomy_exemplars() {
    using loopscan::PatternKind;
    static const std::vector<Exemplar> kExemplars = {
        {PatternKind::InfiniteLoop, 2,
         "i = 0\n"
         "while i < 5:\n"
         "    print(\"This will print forever\")# Missing `i += 1` causes infinite loop\n"},
        {PatternKind::OffByOne, 6,
         "# Intention: print numbers 1 to 5\n"
         "for i in range(1, 6):  # Correct: range(1, 6) prints 1 through 5\n"
         "    print(i)\n"
         "\n"
         "# Off-by-one mistake: this will miss printing 5\n"
         "for i in range(1, 5):\n"
         "    print(i)  # Prints only 1 to 4\n"},
        {PatternKind::ControlFlowMisuse, 5,
         "# Misuse of `else` with `break`\n"
         "for i in range(5):\n"
         "    if i == 3:\n"
         "        break\n"
         "else:\n"
         "    print(\"Loop completed without break\")  # This will NOT run due to `break`\n"},
        {PatternKind::LoopVarReassignment, 4,
         "# Resetting of control variable inside the loop unintentionally\n"
         "for i in range(5):\n"
         "    print(i)\n"
         "    i = 0  # Reinitialization of loop control variable\n"},
        {PatternKind::DeadUnreachableCode, 5,
         "for i in range(5):\n"
         "    if i < 10:\n"
         "        print(\"always true\")  # Redundant check\n"
         "    else:\n"
         "        print(\"never reached\")  # Unreachable branch\n"},
        {PatternKind::SensitiveDataLogging, 3,
         "for user in users:\n"
         "    password = get_password(user)\n"
         "    print(f\"[DEBUG] Authenticating {user} using password: {password}\")  #  Example "
         "of sensitive data leakage\n"},
        {PatternKind::TimingSideChannel, 3,
         "for attempt in login_attempts:\n"
         "    if attempt[\"username\"] == \"admin\":\n"
         "        time.sleep(0.5)  # Delay based on value = admin\n"
         "    validate_login(attempt)\n"},
        {PatternKind::MissingAuthorization, 3,
         "for request in incoming_requests:\n"
         "    if request[\"action\"] == \"delete_all\":\n"
         "        delete_all_data()  # No authorization check before executing request\n"},
        {PatternKind::InsecureEvalInjection, 2,
         "for expr in user_submitted_code:\n"
         "    result = eval(expr)  # Arbitrary code execution\n"
         "    print(result)\n"},
        {PatternKind::UnvalidatedLoopBound, 1,
         "for i in range(int(input(\"How many iterations? \"))):  # Unchecked input could crash "
         "system\n"
         "    perform_task()\n"},
        {PatternKind::ResourceExhaustion, 2,
         "for filename in user_supplied_filenames:\n"
         "    with open(filename, \"w\") as f:  # Mass file creation = DoS risk\n"
         "        f.write(\"X\" * 1000000)\n"},
        {PatternKind::UnencryptedSensitiveStorage, 3,
         "for record in sensitive_records:\n"
         "    with open(\"temp_dump.txt\", \"a\") as f:  # Storing unencrypted PII\n"
         "        f.write(f\"{record['ssn']},{record['name']}\\n\")\n"},
        {PatternKind::HardcodedSecret, 2,
         "for user in users:\n"
         "    token = \"HARDCODED_SECRET_12345\"  # Never hardcode in loop or anywhere\n"
         "    authenticate(user, token)\n"},
        {PatternKind::UnsafeNetworkFileOp, 3,
         "for host in user_input_hosts:\n"
         "    s = socket.socket()\n"
         "    s.connect((host, 80))  # No validation or timeout\n"
         "    s.send(b\"GET / HTTP/1.0\\r\\n\\r\\n\")\n"
         "    s.close()\n"},
        {PatternKind::MissingExceptionHandling, 2,
         "for task in tasks:\n"
         "    process(task)  # Exception thrown by this function will  crash the loop because "
         "of a lack of try/except\n"},
        {PatternKind::InvariantRecompute, 3,
         "data = list(range(10000))\n"
         "for i in range(len(data)):\n"
         "    sqrt_len = len(data)**0.5  # Recomputed in every iteration (inefficient)\n"
         "    data[i] += sqrt_len\n"},
        {PatternKind::RedundantObjectCreation, 2,
         "for _ in range(10000):\n"
         "    temp = {\"key\": \"value\"}  # New dict unnecessarily created every time\n"},
        {PatternKind::StringConcatInLoop, 3,
         "result = \"\"\n"
         "for i in range(1000):\n"
         "    result += str(i)  # Inefficient due to string immutability\n"},
        {PatternKind::MissingLazyEvaluation, 2,
         "# Consumes a lot of memory unnecessarily\n"
         "squares = [x*x for x in range(10**6)]  # All values stored in memory\n"},
        {PatternKind::AvoidableNestedLoop, 4,
         "nums = list(range(1000)) + [999]\n"
         "duplicates = []\n"
         "for i in range(len(nums)):\n"
         "    for j in range(i+1, len(nums)):\n"
         "        if nums[i] == nums[j]:\n"
         "            duplicates.append(nums[i])\n"},
        {PatternKind::InefficientMembershipCheck, 4,
         "items = list(range(10000))\n"
         "search_targets = list(range(5000))\n"
         "for target in search_targets:\n"
         "    if target in items:\n"
         "        pass  # O(n) lookup instead of O(1)\n"},
        {PatternKind::MissingBuiltinComprehension, 4,
         "nums = list(range(1000))\n"
         "squares = []\n"
         "for n in nums:\n"
         "    squares.append(n * n)  # Could use list comprehension\n"},
        {PatternKind::RedundantIOInLoop, 3,
         "with open(\"output.txt\", \"w\") as f:\n"
         "    for i in range(1000):\n"
         "        f.write(f\"Line {i}\\n\")  # Inefficient due to frequent disk writes\n"},
        {PatternKind::UnusedAccumulation, 3,
         "results = []\n"
         "for i in range(1000000):\n"
         "    results.append(i * i)  # Accumulates all results in memory even if not used\n"},
        {PatternKind::RangeLenAntipattern, 4,
         "names = [\"Alice\", \"Bob\", \"Charlie\"]\n"
         "ages = [25, 30, 35]\n"
         "# Less readable and more error-prone\n"
         "for i in range(len(names)):\n"
         "    print(names[i], ages[i])  # Better with zip\n"},
    };
    return kExemplars;
}

// The corrected variant of the boundary exemplar: the loop that matches its
// stated intent must produce no findings at all.
inline std::string corrected_boundary_loop() {
    return "# Intention: print numbers 1 to 5\n"
           "for i in range(1, 6):  # Correct: range(1, 6) prints 1 through 5\n"
           "    print(i)\n";
}

}  // namespace fixtures
