// Decision report panel: risks, recommendation, joint success, and the
// posterior interval table. Text only; every number is a service value.

import type { DecisionReport } from "./types.js";

const fmt = (v: number): string => v.toPrecision(4);

export function reportHtml(report: DecisionReport, tradeoffs: number[]): string {
  const badge =
    report.recommendation === "launch"
      ? `<span class="badge launch">LAUNCH</span>`
      : `<span class="badge rollback">ROLL BACK</span>`;
  const joint = report.joint_success
    ? `<p>joint success: <b>${fmt(report.joint_success.probability)}</b>
       ± ${fmt(report.joint_success.standard_error)} (seed ${report.joint_success.seed})</p>`
    : "";
  const rows = report.posterior.metrics
    .map((m, j) => {
      const [lo, hi] = report.posterior.intervals[j];
      const sig = report.posterior.significant[j] ? "yes" : "no";
      return `<tr><td>${m}</td><td>${fmt(report.posterior.mean[j])}</td>
        <td>[${fmt(lo)}, ${fmt(hi)}]</td><td>${sig}</td></tr>`;
    })
    .join("");
  return `
    <h3>Decision ${badge}</h3>
    <p>trade-offs (${report.posterior.metrics.join(", ")}): ${tradeoffs.map(fmt).join(", ")}</p>
    <p>risk(launch) = <b>${fmt(report.risk_launch)}</b>,
       risk(roll-back) = <b>${fmt(report.risk_rollback)}</b></p>
    ${joint}
    <table>
      <thead><tr><th>metric</th><th>posterior mean</th>
        <th>${Math.round(report.posterior.credible_level * 100)}% interval</th>
        <th>significant</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>
    <p class="note">k = ${report.posterior.k}; linear risks depend on the posterior
    mean only — the covariance drives the joint success probability.</p>`;
}
