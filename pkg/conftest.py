import os
import sys

# 测试从仓库根目录导入 config / utils / service / generator
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
