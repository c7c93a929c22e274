"""Jinja2 rendering for the human-readable report files.

Report templates live under ``TemplateConfig.templates_dir``. Every numeric value is
formatted before it reaches a template, so a report depends only on its data.
"""

from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, Template, TemplateNotFound

from src.shared.config import get_config
from src.shared.exceptions import (
    TemplateNotFoundException,
    TemplateRenderException,
)
from src.shared.logs.logger import logger


def build_environment() -> Environment:
    """Create the Jinja2 environment configured by ``TemplateConfig``.

    Raises:
        ConfigurationException: If the templates directory does not exist
    """
    cfg = get_config().template
    return Environment(
        loader=FileSystemLoader(str(cfg.get_templates_path())),
        autoescape=cfg.autoescape,
        trim_blocks=cfg.trim_blocks,
        lstrip_blocks=cfg.lstrip_blocks,
        keep_trailing_newline=True,
    )


class TemplateRenderer:
    """Renders report templates to strings or files.

    Attributes:
        env: Jinja2 Environment instance
    """

    def __init__(self, env: Environment) -> None:
        self.env = env

    def _load(self, template_name: str) -> Template:
        try:
            return self.env.get_template(template_name)
        except TemplateNotFound as e:
            search_path = "unknown"
            if hasattr(self.env.loader, "searchpath"):
                search_path = str(self.env.loader.searchpath)
            raise TemplateNotFoundException(
                f"Template not found: {template_name}",
                code="TEMPLATE002",
                context={"template_name": template_name, "search_path": search_path},
            ) from e
        except Exception as e:
            raise TemplateRenderException(
                f"Failed to load template {template_name}: {e}",
                code="TEMPLATE003",
                context={"template_name": template_name, "error": str(e)},
            ) from e

    def render_to_string(self, template_name: str, data: dict[str, Any]) -> str:
        """Render a template to text.

        Args:
            template_name: Template file name (e.g., "verify_report.md.j2")
            data: Template variables

        Raises:
            TemplateNotFoundException: If the template file is not found
            TemplateRenderException: If the template fails to load or render
        """
        template = self._load(template_name)
        try:
            return template.render(data)
        except Exception as e:
            raise TemplateRenderException(
                f"Failed to render template {template_name}: {e}",
                code="TEMPLATE004",
                context={
                    "template_name": template_name,
                    "data_keys": list(data.keys()),
                    "error": str(e),
                },
            ) from e

    def render_template(self, template_name: str, data: dict[str, Any], output_path: Path) -> Path:
        """Render a template and write it to ``output_path``.

        Args:
            template_name: Template file name
            data: Template variables
            output_path: Output file; parent directories are created

        Returns:
            The written path

        Raises:
            TemplateNotFoundException: If the template file is not found
            TemplateRenderException: If rendering or writing fails

        Example:
            >>> renderer = TemplateRenderer(build_environment())
            >>> renderer.render_template("verify_report.md.j2", data, Path("verify.md"))
        """
        text = self.render_to_string(template_name, data)
        output_path = Path(output_path)
        try:
            output_path.parent.mkdir(parents=True, exist_ok=True)
            output_path.write_text(text, encoding="utf-8")
        except OSError as e:
            raise TemplateRenderException(
                f"Failed to write rendered template to {output_path}: {e}",
                code="TEMPLATE005",
                context={
                    "template_name": template_name,
                    "output_path": str(output_path),
                    "error": str(e),
                },
            ) from e
        logger.success(f"Wrote {output_path.name}")
        return output_path
