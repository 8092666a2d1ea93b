import init, { analyze_source, sample_size, run_governance } from "./pkg/admintoken_web.js";

const $ = (id) => document.getElementById(id);

$("source").value = `pragma solidity ^0.4.24;

contract Token {
    address owner;
    uint256 public totalSupply;
    mapping(address => uint256) balances;

    event Transfer(address indexed from, address indexed to, uint256 value);
    event Approval(address indexed owner, address indexed spender, uint256 value);

    modifier onlyOwner() { require(msg.sender == owner); _; }

    function balanceOf(address who) public view returns (uint256) { return balances[who]; }
    function transfer(address to, uint256 v) public returns (bool) { return true; }
    function transferFrom(address f, address t, uint256 v) public returns (bool) { return true; }
    function approve(address s, uint256 v) public returns (bool) { return true; }
    function allowance(address o, address s) public view returns (uint256) { return 0; }

    // only the owner may mint
    function mint(address to, uint256 v) public onlyOwner { balances[to] += v; }
}`;

$("board").value = JSON.stringify({
  trustees: ["A", "B", "C"], threshold: 2,
  maintenance_delay: 100, pause_max: 50, pause_cooldown: 100,
});

$("scenario").value = JSON.stringify([
  { at: 0, op: "vote", actor: "A", action_id: 0 },
  { at: 10, op: "vote", actor: "B", action_id: 0 },
  { at: 50, op: "vote", actor: "C", action_id: 0 },
  { at: 110, op: "vote", actor: "A", action_id: 0 },
  { at: 120, op: "pause", actor: "C" },
  { at: 130, op: "query_paused" },
], null, 1);

function analyze() {
  const out = JSON.parse(analyze_source($("source").value));
  $("bits").textContent = out.bits + (out.unterminated_comment ? "  (unterminated comment)" : "");
  const table = $("features");
  table.replaceChildren();
  for (const f of out.features) {
    const row = table.insertRow();
    row.insertCell().textContent = "f" + f.feature;
    row.insertCell().textContent = f.name;
    const cell = row.insertCell();
    cell.textContent = f.present ? "yes" : "no";
    if (f.present) cell.className = "on";
  }
  $("witnesses").textContent = out.witnesses
    .map((w) => `f${w.feature} ${w.pattern} [${w.start}..${w.end}] ${JSON.stringify(w.text)}`)
    .join("\n") || "none";
}

function slovin() {
  const out = JSON.parse(sample_size(Number($("population").value), Number($("confidence").value)));
  $("sample-n").textContent = out.error ? "error: " + out.error : "n = " + out.n;
}

function governance() {
  const out = JSON.parse(run_governance($("board").value, $("scenario").value));
  if (out.error) {
    $("trace").textContent = "error: " + out.error;
    return;
  }
  const lines = out.trace.map((e) => {
    let line = `${e.seq}\tt=${e.at}\t${e.kind}\t${e.actor}`;
    if (e.action_id !== undefined) line += `\taction ${e.action_id}`;
    if (e.result !== undefined) line += `\t-> ${e.result}`;
    if (e.rejected) line += `\trejected: ${e.rejected}`;
    return line;
  });
  $("trace").textContent = lines.join("\n") + "\n\nfinal state\n" + JSON.stringify(out.state, null, 1);
}

await init();
$("analyze").onclick = analyze;
$("slovin").onclick = slovin;
$("run").onclick = governance;
analyze();
slovin();
