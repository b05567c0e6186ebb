"""Prompt assembly from bundled instruction and few-shot assets.

Two variants exist: with the motion-script sections (``hms``) and without
(``plain``).  The plain variant strips the motion-script sections from the
few-shot user contents, so the assembled prompt never mentions them.
Assembly is byte-deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

HMS_SECTION_HEADERS = (
    "DOMINANT HAND DISTANCES:",
    "NON-DOMINANT HAND DISTANCES:",
    "DISTANCE BETWEEN HANDS:",
    "HAND ORIENTATIONS:",
)


def _asset_text(name: str) -> str:
    return resources.files("handmotion.phonology").joinpath(f"assets/{name}").read_text()


def strip_hms_sections(user_text: str) -> str:
    """Drop motion-script section headers and their item lines."""
    out = []
    in_section = False
    for line in user_text.splitlines():
        stripped = line.strip()
        if stripped in HMS_SECTION_HEADERS:
            in_section = True
            continue
        if in_section and stripped.startswith("- "):
            continue
        in_section = False
        out.append(line)
    return "\n".join(out)


@dataclass
class PromptTemplate:
    instructions: str
    fewshot: list  # [{"user": str, "model": {...}}]

    def query_text(self, lines, hms_block: str | None) -> str:
        header = ("Use the information to describe the corresponding motion. "
                  "The comment section of the model answers, when present, is here "
                  "for your reference as indications of the correct practices of "
                  "the task, it is not to be included in your own output.")
        body = header + "\nATTRIBUTES:\n" + "\n".join(lines)
        if hms_block:
            body += "\n" + hms_block
        return body

    def render(self, lines, hms_block: str | None) -> str:
        messages = []
        for example in self.fewshot:
            messages.append({"role": "user", "content": example["user"]})
            messages.append({"role": "model", "content": example["model"]})
        messages.append({"role": "user", "content": self.query_text(lines, hms_block)})
        return (self.instructions.rstrip("\n") + "\n\n"
                + json.dumps(messages, indent=2, ensure_ascii=False) + "\n")


def load_template(variant: str = "hms") -> PromptTemplate:
    """Load the bundled template; ``variant`` is "hms" or "plain"."""
    fewshot = json.loads(_asset_text("fewshot.json"))
    if variant == "hms":
        return PromptTemplate(_asset_text("instructions_hms.txt"), fewshot)
    if variant == "plain":
        stripped = [{"user": strip_hms_sections(e["user"]), "model": e["model"]}
                    for e in fewshot]
        return PromptTemplate(_asset_text("instructions_plain.txt"), stripped)
    raise ValueError(f"unknown prompt variant {variant!r}")


def assemble_prompt(lines, hms_block: str | None = None,
                    template: PromptTemplate | None = None) -> str:
    """Full prompt string for one record's attribute lines.

    The hms sections are included iff ``hms_block`` is given; the template
    defaults to the matching bundled variant.
    """
    if template is None:
        template = load_template("hms" if hms_block else "plain")
    return template.render(lines, hms_block)
