#!/usr/bin/env python3
"""
aspectmill 测试语料生成脚本
把统计表语料和可分语料写成 JSON Lines 文件
"""

import argparse
import sys
from pathlib import Path

from aspectmill.data.corpus import compute_stats, save_corpus
from aspectmill.data.fixtures import separable_corpus, table1_corpus
from aspectmill.data.taxonomy import resolve_taxonomy
from aspectmill.errors import AspectMillError


def main(argv=None) -> int:
    """主函数"""
    parser = argparse.ArgumentParser(description="生成 aspectmill 测试语料")
    parser.add_argument("--out", type=Path, default=Path("fixtures"), help="输出目录")
    parser.add_argument("--taxonomy", type=Path, help="标签体系文件（默认内置体系）")
    parser.add_argument("--sentences-per-aspect", type=int, default=6)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)

    print("🧪 aspectmill 测试语料生成工具")
    print("=" * 50)

    try:
        taxonomy = resolve_taxonomy(args.taxonomy)
        args.out.mkdir(parents=True, exist_ok=True)

        print("\n📊 生成统计表语料...")
        table1 = table1_corpus(taxonomy)
        table1_path = args.out / "table1.jsonl"
        save_corpus(table1, table1_path)
        stats = compute_stats(table1)
        print(f"✅ {table1_path}: {stats.review_count} 条评论, {stats.sentence_count} 个句子, "
              f"{stats.annotation_count} 个标注")

        print("\n🧩 生成可分语料...")
        separable = separable_corpus(taxonomy, args.sentences_per_aspect, args.seed)
        separable_path = args.out / "separable.jsonl"
        save_corpus(separable, separable_path)
        print(f"✅ {separable_path}: {len(separable.reviews)} 条评论, {separable.sentence_count} 个句子")
    except (AspectMillError, OSError) as e:
        print(f"❌ 生成失败: {e}")
        return 1

    print("\n🎉 完成！")
    print("\n📌 下一步:")
    print(f"   aspectmill stats --corpus {args.out / 'table1.jsonl'}")
    print(f"   aspectmill train --arch hier --corpus {args.out / 'separable.jsonl'} --bundle hier.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
